#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "perideg/certify.hpp"

using namespace perideg;

namespace {

const double kTwoPi = 2.0 * M_PI;

const EquivariantIndex& point_index(const ExistenceCertificate& cert, const std::string& id) {
    for (const auto& idx : cert.points)
        if (idx.owner == id) return idx;
    throw std::runtime_error("no index for " + id);
}

}  // namespace

TEST_CASE("analysis of the resonant four-dimensional case") {
    const SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    const ExistenceCertificate cert = analyze(spec);

    CHECK(cert.verdict == Verdict::Proven);
    CHECK(*cert.witness_k == 2);
    CHECK(cert.lhs == 0);
    CHECK(cert.rhs == -1);
    CHECK(cert.global_exclusion == std::set<int>{1});

    CHECK(point_index(cert, "origin").brouwer == -1);
    CHECK(point_index(cert, "c1+").brouwer == 1);
    CHECK(point_index(cert, "c1-").brouwer == 1);
    CHECK(cert.at_infinity.brouwer == 1);
    CHECK(cert.provenance.at("brouwer:origin") == "sign-det");
    CHECK(cert.provenance.at("brouwer:infinity") == "override");

    CHECK(cert.so2_infinity == cert.so2_sum);
    CHECK(cert.minimal_period_notes.size() == 1);
    CHECK(cert.minimal_period_notes[0].owner == "origin");
    CHECK(cert.minimal_period_notes[0].periods == std::vector<double>{kTwoPi});
}

TEST_CASE("analysis with a singular origin resolves its index by additivity") {
    const SystemSpec spec = build_system(testutil::model_singular_origin(), kTwoPi);
    const ExistenceCertificate cert = analyze(spec);

    CHECK(cert.verdict == Verdict::Proven);
    CHECK(*cert.witness_k == 2);
    CHECK(cert.lhs == 0);
    CHECK(cert.rhs == -1);

    const EquivariantIndex& origin = point_index(cert, "origin");
    CHECK(origin.brouwer == -1);
    CHECK(origin.singular_hessian);
    CHECK(cert.provenance.at("brouwer:origin") == "sum-residual");
}

TEST_CASE("sitnikov analysis across periods") {
    const ModelPotential m = testutil::sitnikov();

    const ExistenceCertificate proven = analyze(build_system(m, kTwoPi));
    CHECK(proven.verdict == Verdict::Proven);
    CHECK(*proven.witness_k == 1);
    CHECK(proven.lhs == 0);
    CHECK(proven.rhs == -1);

    const ExistenceCertificate at_23 = analyze(build_system(m, 2.3));
    CHECK(at_23.verdict == Verdict::Proven);
    CHECK(*at_23.witness_k == 1);

    const ExistenceCertificate small = analyze(build_system(m, 1.0));
    CHECK(small.verdict == Verdict::NotDecided);
    for (const auto& row : small.table) {
        CHECK(row.lhs == 0);
        CHECK(row.rhs == 0);
    }
}

TEST_CASE("additivity check") {
    const SumFormulaCheck check = sum_formula_check(build_system(testutil::model_resonant_origin(), kTwoPi));
    CHECK(check.lhs == 1);
    CHECK(check.rhs == 1);
    CHECK(check.residual == 0);

    // removing a point pair breaks the balance and flags the input
    SystemSpec broken = build_system(testutil::model_resonant_origin(), kTwoPi);
    broken.critical_points.resize(1);
    const SumFormulaCheck bad = sum_formula_check(broken);
    CHECK(bad.residual != 0);
}

TEST_CASE("minimal period menu") {
    CHECK(minimal_period_menu({1}, kTwoPi) == std::set<double>{kTwoPi});
    CHECK(minimal_period_menu({2, 3}, 6.0) == std::set<double>{2.0, 3.0, 6.0});
    CHECK(minimal_period_menu({4}, 4.0) == std::set<double>{1.0});
    CHECK_THROWS_AS(minimal_period_menu({}, 1.0), std::invalid_argument);
}

TEST_CASE("verdict is stable under point permutation and padding") {
    SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    const ExistenceCertificate base = analyze(spec);

    std::reverse(spec.critical_points.begin(), spec.critical_points.end());
    const ExistenceCertificate permuted = analyze(spec);
    CHECK(permuted.verdict == base.verdict);
    CHECK(*permuted.witness_k == *base.witness_k);
    CHECK(permuted.lhs == base.lhs);
    CHECK(permuted.rhs == base.rhs);

    // a far-away point with zero index and an empty count table changes nothing
    SystemSpec padded = build_system(testutil::model_resonant_origin(), kTwoPi);
    CriticalPoint extra;
    extra.id = "padding";
    extra.location = {9.0, 9.0, 9.0, 9.0};
    extra.hessian = -1.0 * SymMatrix::identity(4);
    extra.brouwer_override = 0;
    padded.critical_points.push_back(extra);
    padded.potential = PotentialBundle{};  // padding is not stationary for the model callbacks
    const ExistenceCertificate padded_cert = analyze(padded);
    CHECK(padded_cert.verdict == base.verdict);
    CHECK(*padded_cert.witness_k == *base.witness_k);
    CHECK(padded_cert.rhs == base.rhs);
}

TEST_CASE("enlarging the scanned range never flips a proven verdict") {
    const SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    const ExistenceCertificate base = analyze(spec);
    AnalyzeOptions opts;
    opts.k_max_override = base.k_max + 10;
    const ExistenceCertificate wide = analyze(spec, opts);
    CHECK(wide.verdict == Verdict::Proven);
    CHECK(*wide.witness_k == *base.witness_k);
}

TEST_CASE("a fully excluded scan range is reported as silent") {
    // pin the examined range to the single excluded coordinate
    const SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    AnalyzeOptions opts;
    opts.k_max_override = 1;  // coordinate 1 is excluded by the resonant origin
    std::string message;
    try {
        analyze(spec, opts);
    } catch (const std::runtime_error& e) {
        message = e.what();
    }
    CHECK(message.find("criterion silent") != std::string::npos);
}

TEST_CASE("a degenerate point in low dimension is resolved by the boundary oracle") {
    // v_inf at the qualifying boundary makes the origin Hessian vanish, so
    // the sign-determinant rule fails; with callbacks and n = 1 the
    // boundary-sampling degree takes over (the field is cubic near 0)
    ModelPotential m;
    m.n = 1;
    m.a = 1.0;
    m.v_inf = SymMatrix::diagonal({-1.0});
    SystemSpec spec = build_system(m, kTwoPi);
    REQUIRE(spec.critical_points.size() == 1);
    CHECK(morse_index(spec.critical_points[0].hessian).degenerate);

    const ExistenceCertificate cert = analyze(spec);
    CHECK(cert.provenance.at("brouwer:origin") == "boundary-oracle");
    CHECK(point_index(cert, "origin").brouwer == 1);
    CHECK(point_index(cert, "origin").singular_hessian);
    // every count table vanishes here, so the criterion stays silent-handed
    CHECK(cert.verdict == Verdict::NotDecided);
    CHECK(cert.so2_infinity == cert.so2_sum);
}

TEST_CASE("two unobtainable indices cannot be resolved") {
    SystemSpec spec = build_system(testutil::model_singular_origin(), kTwoPi);
    // make a second index unobtainable as well
    spec.inf_brouwer_override.reset();
    spec.potential = PotentialBundle{};
    std::string message;
    try {
        analyze(spec);
    } catch (const std::runtime_error& e) {
        message = e.what();
    }
    CHECK(message.find("more than one") != std::string::npos);
}

TEST_CASE("continuation certificate for proven bases") {
    const ContinuationCertificate resonant =
        continuation_certificate(build_system(testutil::model_resonant_origin(), kTwoPi));
    CHECK(resonant.witness_k == 2);
    CHECK_FALSE(resonant.strong_form);  // the origin is resonant at mode 1
    CHECK(resonant.symmetry_breaking_possible);

    const ContinuationCertificate sitnikov =
        continuation_certificate(build_system(testutil::sitnikov(), kTwoPi));
    CHECK(sitnikov.witness_k == 1);
    CHECK(sitnikov.strong_form);  // no resonance at any stationary point

    CHECK_THROWS(continuation_certificate(build_system(testutil::sitnikov(), 1.0)));
}

TEST_CASE("text report carries the headline facts") {
    const std::string report = text_report(analyze(build_system(testutil::sitnikov(), kTwoPi)));
    CHECK(report.find("proven") != std::string::npos);
    CHECK(report.find("witness: k = 1") != std::string::npos);
    CHECK(report.find("infinity") != std::string::npos);
}
