#include "perideg/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace perideg {

std::string to_string(Verdict v) { return v == Verdict::Proven ? "proven" : "not-decided"; }

namespace {

struct ResolvedBrouwer {
    long long value = 0;
    std::string source;  // "override" | "sign-det" | "boundary-oracle" | "sum-residual"
    bool resolved = false;
};

double isolation_radius(const SystemSpec& spec, size_t point_index) {
    double r = 1.0;
    const Vec& p = spec.critical_points[point_index].location;
    for (size_t j = 0; j < spec.critical_points.size(); ++j) {
        if (j == point_index) continue;
        r = std::min(r, 0.5 * norm2(spec.critical_points[j].location - p));
    }
    return r;
}

/// Resolves ind(-grad, p) for every stationary point and for infinity.
/// Order of preference: explicit override, the sign-determinant formula for
/// a nonsingular Hessian, the boundary-sampling oracle (n <= 3, callbacks
/// required), and finally the additivity residual, which can cover at most
/// one remaining unknown.
void resolve_brouwer_indices(const SystemSpec& spec, const Tolerances& tols,
                             std::vector<ResolvedBrouwer>& points, ResolvedBrouwer& infinity) {
    points.assign(spec.critical_points.size(), {});
    infinity = {};

    for (size_t i = 0; i < spec.critical_points.size(); ++i) {
        const auto& cp = spec.critical_points[i];
        if (cp.brouwer_override) {
            points[i] = {*cp.brouwer_override, "override", true};
            continue;
        }
        try {
            points[i] = {brouwer_index_nondegenerate(cp.hessian, tols), "sign-det", true};
            continue;
        } catch (const std::domain_error&) {
        }
        if (spec.potential.available() && spec.n <= 3) {
            const auto& grad = spec.potential.gradient;
            VectorField field = [&grad](const Vec& x) {
                Vec g = grad(x);
                for (double& v : g) v = -v;
                return g;
            };
            points[i] = {brouwer_index_oracle(field, cp.location, isolation_radius(spec, i)),
                         "boundary-oracle", true};
        }
    }

    if (spec.inf_brouwer_override) {
        infinity = {*spec.inf_brouwer_override, "override", true};
    } else {
        try {
            infinity = {brouwer_index_nondegenerate(spec.v_inf, tols), "sign-det", true};
        } catch (const std::domain_error&) {
        }
    }

    int unresolved = infinity.resolved ? 0 : 1;
    for (const auto& r : points) unresolved += r.resolved ? 0 : 1;
    if (unresolved > 1)
        throw std::runtime_error(
            "analyze: more than one local index is unobtainable; the additivity residual can "
            "recover at most one");
    if (unresolved == 0) return;

    if (!infinity.resolved) {
        long long sum = 0;
        for (const auto& r : points) sum += r.value;
        infinity = {sum, "sum-residual", true};
        return;
    }
    for (auto& r : points) {
        if (r.resolved) continue;
        long long others = 0;
        for (const auto& o : points)
            if (&o != &r && o.resolved) others += o.value;
        r = {infinity.value - others, "sum-residual", true};
        return;
    }
}

}  // namespace

ExistenceCertificate analyze(const SystemSpec& spec, const AnalyzeOptions& opts) {
    spec.validate();
    const Tolerances& tols = opts.tols;

    std::vector<ResolvedBrouwer> brouwer_points;
    ResolvedBrouwer brouwer_inf;
    resolve_brouwer_indices(spec, tols, brouwer_points, brouwer_inf);

    ExistenceCertificate cert;
    cert.period = spec.period;
    cert.tols = tols;
    cert.input_hash = opts.input_hash;

    cert.at_infinity = index_of_point("infinity", spec.v_inf, brouwer_inf.value, spec.period, tols);
    cert.provenance["brouwer:infinity"] = brouwer_inf.source;
    for (size_t i = 0; i < spec.critical_points.size(); ++i) {
        const auto& cp = spec.critical_points[i];
        cert.points.push_back(
            index_of_point(cp.id, cp.hessian, brouwer_points[i].value, spec.period, tols));
        cert.provenance["brouwer:" + cp.id] = brouwer_points[i].source;
    }
    cert.provenance["jk"] = "eigenvalue count above the mode threshold (cyclic Jacobi spectrum)";
    cert.provenance["exclusion"] = "gcd closure of the resonant modes, united over all owners";
    cert.provenance["potential"] = spec.potential.available()
                                       ? "callbacks attached (stationarity verified)"
                                       : "hessian-only (stationarity taken on trust)";

    int k_max = std::max(cert.at_infinity.k_cutoff, 0);
    for (const auto& idx : cert.points) k_max = std::max(k_max, idx.k_cutoff);
    k_max += 1;  // one past every cutoff: beyond it all compared coordinates vanish
    if (opts.k_max_override) k_max = *opts.k_max_override;
    cert.k_max = std::max(k_max, 1);

    cert.global_exclusion = cert.at_infinity.exclusion;
    for (const auto& idx : cert.points)
        cert.global_exclusion.insert(idx.exclusion.begin(), idx.exclusion.end());

    cert.so2_infinity = cert.at_infinity.brouwer;
    cert.so2_sum = 0;
    for (const auto& idx : cert.points) cert.so2_sum += idx.brouwer;

    for (const auto& idx : cert.points) {
        if (!idx.resonant_modes.empty()) {
            PeriodNote note;
            note.owner = idx.owner;
            note.modes.assign(idx.resonant_modes.begin(), idx.resonant_modes.end());
            for (double p : minimal_period_menu(idx.resonant_modes, spec.period))
                note.periods.push_back(p);
            cert.minimal_period_notes.push_back(std::move(note));
        }
    }
    if (!cert.at_infinity.resonant_modes.empty()) {
        PeriodNote note;
        note.owner = "infinity";
        note.modes.assign(cert.at_infinity.resonant_modes.begin(),
                          cert.at_infinity.resonant_modes.end());
        for (double p : minimal_period_menu(cert.at_infinity.resonant_modes, spec.period))
            note.periods.push_back(p);
        cert.minimal_period_notes.push_back(std::move(note));
    }

    bool any_compared = false;
    for (int k = 1; k <= cert.k_max; ++k) {
        if (cert.global_exclusion.count(k)) continue;
        any_compared = true;
        ComparisonRow row;
        row.k = k;
        row.lhs = cert.at_infinity.value.zk(k);
        row.rhs = 0;
        for (const auto& idx : cert.points) row.rhs += idx.value.zk(k);
        cert.table.push_back(row);
        if (row.lhs != row.rhs && cert.verdict != Verdict::Proven) {
            cert.verdict = Verdict::Proven;
            cert.witness_k = k;
            cert.lhs = row.lhs;
            cert.rhs = row.rhs;
        }
    }
    if (!any_compared)
        throw std::runtime_error(
            "analyze: criterion silent; every coordinate k in [1," + std::to_string(cert.k_max) +
            "] lies in the exclusion set");
    cert.provenance["witness"] = "first coordinate outside the exclusion set with lhs != rhs";
    return cert;
}

SumFormulaCheck sum_formula_check(const SystemSpec& spec, const Tolerances& tols) {
    std::vector<ResolvedBrouwer> points;
    ResolvedBrouwer infinity;
    resolve_brouwer_indices(spec, tols, points, infinity);
    SumFormulaCheck check;
    check.lhs = infinity.value;
    for (const auto& r : points) check.rhs += r.value;
    check.residual = check.lhs - check.rhs;
    return check;
}

std::set<double> minimal_period_menu(const std::set<int>& resonant_modes, double period) {
    if (resonant_modes.empty())
        throw std::invalid_argument("minimal_period_menu: empty mode set");
    if (period <= 0.0) throw std::invalid_argument("minimal_period_menu: period must be positive");
    std::set<double> menu;
    for (int g : gcd_closure(resonant_modes)) menu.insert(period / g);
    return menu;
}

ContinuationCertificate continuation_certificate(const SystemSpec& spec0,
                                                 const AnalyzeOptions& opts) {
    ContinuationCertificate cont;
    cont.base = analyze(spec0, opts);
    if (cont.base.verdict != Verdict::Proven)
        throw std::runtime_error("continuation_certificate: base analysis is not proven");
    cont.witness_k = *cont.base.witness_k;

    cont.strong_form = cont.base.at_infinity.resonant_modes.empty();
    for (const auto& idx : cont.base.points)
        if (!idx.resonant_modes.empty()) cont.strong_form = false;

    cont.symmetry_breaking_possible = !cont.base.points.empty();

    std::ostringstream os;
    if (cont.strong_form) {
        os << "Two closed connected solution branches C-/C+ of the family exist, one in each "
              "half-space of the parameter: each meets the annulus of non-stationary solutions at "
              "parameter 0 and is either unbounded or returns to a stationary point.";
    } else {
        os << "Either infinitely many non-stationary periodic solutions of the member at "
              "parameter 0 accumulate on a stationary point, or two closed connected branches "
              "C-/C+ exist, one per parameter half-space, each meeting the annulus of "
              "non-stationary solutions at parameter 0 and either unbounded or returning to a "
              "stationary point.";
    }
    if (cont.symmetry_breaking_possible)
        os << " A bounded branch would connect loops of different isotropy, so its minimal period "
              "would change along the branch.";
    cont.alternative = os.str();
    return cont;
}

namespace {

std::string join_ints(const std::set<int>& s) {
    std::ostringstream os;
    bool first = true;
    for (int v : s) {
        if (!first) os << ",";
        os << v;
        first = false;
    }
    return os.str();
}

void describe_index(std::ostringstream& os, const EquivariantIndex& idx) {
    os << "  " << idx.owner << ": ind = " << idx.brouwer;
    os << ", jk = {";
    bool first = true;
    for (const auto& [k, j] : idx.jk) {
        if (!first) os << ", ";
        os << k << ":" << j;
        first = false;
    }
    os << "}";
    if (idx.resonant()) os << ", resonant modes {" << join_ints(idx.resonant_modes) << "}";
    if (idx.singular_hessian) os << ", singular Hessian";
    os << "\n";
}

}  // namespace

std::string text_report(const ExistenceCertificate& cert) {
    std::ostringstream os;
    os << "verdict: " << to_string(cert.verdict) << "\n";
    if (cert.witness_k)
        os << "witness: k = " << *cert.witness_k << " with " << cert.lhs << " != " << cert.rhs
           << "\n";
    os << "period: " << cert.period << "\n";
    os << "checked coordinates: 1.." << cert.k_max;
    if (!cert.global_exclusion.empty())
        os << " excluding {" << join_ints(cert.global_exclusion) << "}";
    os << "\n";
    os << "local indices (integer tables are ring coordinates; \"origin\" names a stationary "
          "point, never the ring zero):\n";
    describe_index(os, cert.at_infinity);
    for (const auto& idx : cert.points) describe_index(os, idx);
    os << "so2 coordinate: infinity " << cert.so2_infinity << " vs point sum " << cert.so2_sum
       << "\n";
    os << "comparison rows (k: infinity vs sum):\n";
    for (const auto& row : cert.table)
        os << "  k=" << row.k << ": " << row.lhs << (row.lhs == row.rhs ? " == " : " != ")
           << row.rhs << "\n";
    for (const auto& note : cert.minimal_period_notes) {
        os << "solutions near " << note.owner << " (resonant modes";
        for (int m : note.modes) os << " " << m;
        os << ") can only have minimal period in {";
        for (size_t i = 0; i < note.periods.size(); ++i) os << (i ? ", " : "") << note.periods[i];
        os << "}\n";
    }
    for (const auto& [key, source] : cert.provenance) os << "provenance " << key << ": " << source << "\n";
    if (!cert.input_hash.empty()) os << "input hash: " << cert.input_hash << "\n";
    return os.str();
}

std::string text_report(const ContinuationCertificate& cert) {
    std::ostringstream os;
    os << "continuation certificate (witness k = " << cert.witness_k << ")\n";
    os << "strong form: " << (cert.strong_form ? "yes" : "no") << "\n";
    os << "symmetry breaking possible: " << (cert.symmetry_breaking_possible ? "yes" : "no")
       << "\n";
    os << cert.alternative << "\n";
    os << "--- base analysis ---\n";
    os << text_report(cert.base);
    return os.str();
}

}  // namespace perideg
