// Command-line front end: existence certificates, orbit verification,
// branch tracing, bundled reference cases, and a quick self-test.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "perideg/certify.hpp"
#include "perideg/galerkin.hpp"
#include "perideg/json_io.hpp"

using namespace perideg;

namespace {

constexpr const char* kVersion = "0.1.0";
const double kTwoPi = 2.0 * M_PI;

struct CommonOptions {
    std::string input_path;
    double period_override = 0.0;  // 0 = keep the input's period
    double tol_res_scale = 1e-8;
    double cluster_scale = 1e-9;
    int modes = 64;
    double newton_tol = 1e-10;
    int k_max = 0;  // 0 = automatic
    std::string format = "text";
    unsigned long long seed = 1;

    Tolerances tolerances() const {
        Tolerances t;
        t.resonance_scale = tol_res_scale;
        t.cluster_scale = cluster_scale;
        return t;
    }
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_input = true) {
    if (with_input) cmd->add_option("input", opt.input_path, "system description (JSON)")->required();
    cmd->add_option("--T", opt.period_override, "override the period");
    cmd->add_option("--tol-res", opt.tol_res_scale, "resonance tolerance scale (default 1e-8)");
    cmd->add_option("--cluster-tol", opt.cluster_scale, "eigenvalue cluster tolerance scale (default 1e-9)");
    cmd->add_option("--modes", opt.modes, "Fourier mode cutoff for the verifier (default 64)");
    cmd->add_option("--newton-tol", opt.newton_tol, "Newton gradient tolerance (default 1e-10)");
    cmd->add_option("--kmax", opt.k_max, "override the scanned coordinate range");
    cmd->add_option("--format", opt.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--seed", opt.seed, "seed for randomized self-checks");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SystemSpec load_system(const CommonOptions& opt, std::string* hash_out) {
    const std::string bytes = read_file(opt.input_path);
    if (hash_out) *hash_out = fnv1a_hex(bytes);
    SystemSpec spec = system_from_json(Json::parse(bytes));
    if (opt.period_override > 0.0) spec.period = opt.period_override;
    return spec;
}

AnalyzeOptions analyze_options(const CommonOptions& opt, const std::string& hash) {
    AnalyzeOptions a;
    a.tols = opt.tolerances();
    if (opt.k_max > 0) a.k_max_override = opt.k_max;
    a.input_hash = hash;
    return a;
}

int run_analyze(const CommonOptions& opt) {
    std::string hash;
    const SystemSpec spec = load_system(opt, &hash);
    const ExistenceCertificate cert = analyze(spec, analyze_options(opt, hash));
    if (opt.format == "json")
        std::cout << certificate_to_json(cert).dump(2) << "\n";
    else
        std::cout << text_report(cert);
    return cert.verdict == Verdict::Proven ? 0 : 2;
}

GalerkinConfig galerkin_config(const CommonOptions& opt) {
    GalerkinConfig cfg;
    cfg.modes = opt.modes;
    cfg.newton_tol = opt.newton_tol;
    return cfg;
}

int run_verify(const CommonOptions& opt, int forced_mode, const std::string& csv_path) {
    std::string hash;
    const SystemSpec spec = load_system(opt, &hash);
    if (!spec.potential.available())
        throw std::runtime_error("hessian-only spec, verification unavailable (no potential callbacks)");
    const ExistenceCertificate cert = analyze(spec, analyze_options(opt, hash));
    if (cert.verdict != Verdict::Proven)
        throw std::runtime_error("analysis is not proven; nothing to verify");

    const int mode = forced_mode > 0 ? forced_mode : *cert.witness_k;
    const OrbitResult orbit = find_orbit_auto(spec, mode, galerkin_config(opt));
    if (opt.format == "json") {
        Json j;
        j["witness_k"] = mode;
        j["orbit"] = orbit_to_json(orbit);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "witness k = " << mode << "\n"
                  << (orbit.accepted ? std::string("orbit accepted")
                                     : "no orbit accepted: " + orbit.note)
                  << "\n"
                  << "  seed: mode " << orbit.seed_mode << ", amplitude " << orbit.seed_amplitude
                  << ", at " << orbit.seed_point << "\n"
                  << "  gradient norm " << orbit.grad_norm << ", ode residual " << orbit.ode_residual
                  << "\n"
                  << "  periodicity defect " << orbit.rk4_periodicity_defect << ", rk4 gap "
                  << orbit.rk4_trajectory_gap << "\n"
                  << "  minimal period " << orbit.minimal_period << " (isotropy "
                  << orbit.isotropy_k << ")\n";
    }
    if (!csv_path.empty() && orbit.accepted) {
        std::ofstream out(csv_path);
        out << orbit_to_csv(orbit.loop);
        std::cerr << "wrote " << csv_path << "\n";
    }
    return orbit.accepted ? 0 : 1;
}

int run_trace(const CommonOptions& opt, const std::string& family_name, double lambda_max) {
    std::string hash;
    const SystemSpec spec = load_system(opt, &hash);
    if (!spec.potential.available())
        throw std::runtime_error("hessian-only spec, tracing unavailable (no potential callbacks)");
    const ContinuationCertificate cont = continuation_certificate(spec, analyze_options(opt, hash));
    const OrbitResult orbit = find_orbit_auto(spec, cont.witness_k, galerkin_config(opt));
    if (!orbit.accepted) throw std::runtime_error("no starting orbit accepted: " + orbit.note);

    PotentialFamily family;
    if (family_name == "constant") {
        family = constant_family(spec.potential);
    } else if (family_name == "coupling") {
        if (!spec.model_a)
            throw std::runtime_error("the coupling family needs a model spec (field \"a\")");
        ModelPotential m;
        m.n = spec.n;
        m.a = *spec.model_a;
        m.v_inf = spec.v_inf;
        family = coupling_family(m);
    } else {
        throw std::runtime_error("unknown family '" + family_name + "'");
    }

    TraceConfig tc;
    if (lambda_max > 0.0) tc.lambda_bound = lambda_max;
    const BranchRecord forward = trace_branch(family, spec, orbit, +1, tc);
    const BranchRecord backward = trace_branch(family, spec, orbit, -1, tc);

    if (opt.format == "json") {
        Json j;
        j["continuation"] = continuation_to_json(cont);
        j["start"] = orbit_to_json(orbit);
        j["forward"] = branch_to_json(forward);
        j["backward"] = branch_to_json(backward);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text_report(cont);
        for (const auto* b : {&forward, &backward}) {
            std::cout << "branch direction " << b->direction << ": " << to_string(b->verdict)
                      << ", " << b->samples.size() << " samples, |lambda| reaches "
                      << std::abs(b->samples.back().lambda)
                      << (b->symmetry_breaking ? ", symmetry breaking observed" : "") << "\n";
        }
    }
    const bool ok = forward.verdict != BranchVerdict::StepFailure &&
                    backward.verdict != BranchVerdict::StepFailure;
    return ok ? 0 : 1;
}

// ------------------------------------------------------------- reproduce

struct Diff {
    std::string name;
    std::string expected;
    std::string got;
    bool ok;
};

class DiffTable {
public:
    template <typename T>
    void check(const std::string& name, const T& expected, const T& got) {
        std::ostringstream e, g;
        e << expected;
        g << got;
        rows_.push_back({name, e.str(), g.str(), e.str() == g.str()});
    }
    bool all_ok() const {
        for (const auto& r : rows_)
            if (!r.ok) return false;
        return true;
    }
    void print(std::ostream& os) const {
        for (const auto& r : rows_)
            os << (r.ok ? "  ok      " : "  MISMATCH") << "  " << r.name << ": expected "
               << r.expected << ", got " << r.got << "\n";
    }

private:
    std::vector<Diff> rows_;
};

ModelPotential reference_model(const std::string& id) {
    ModelPotential m;
    if (id == "6.5" || id == "6.8") {
        m.n = 4;
        m.a = 1.0;
        m.v_inf = SymMatrix::diagonal({3.5, -2.0, 0.0, -1.0 / (2.0 * std::sqrt(2.0))});
    } else if (id == "6.6") {
        m.n = 4;
        m.a = 1.0;
        m.v_inf = SymMatrix::diagonal({3.5, -1.0, 0.0, -1.0 / (2.0 * std::sqrt(2.0))});
    } else if (id == "6.7" || id == "6.9") {
        m.n = 1;
        m.a = 0.25;
        m.v_inf = SymMatrix(1);
    } else {
        throw std::runtime_error("unknown reference case '" + id + "' (expected 6.5 ... 6.9)");
    }
    return m;
}

const EquivariantIndex& owner_index(const ExistenceCertificate& cert, const std::string& id) {
    for (const auto& idx : cert.points)
        if (idx.owner == id) return idx;
    throw std::runtime_error("missing index owner " + id);
}

long long table_count(const SymMatrix& a, double period, int k) {
    return eigen_sym(a).count_strictly_above(mode_threshold(period, k));
}

void reproduce_four_dim(const std::string& id, DiffTable& table, const Tolerances& tols) {
    const ModelPotential m = reference_model(id);
    const SystemSpec spec = build_system(m, kTwoPi, tols);
    AnalyzeOptions opts;
    opts.tols = tols;
    const ExistenceCertificate cert = analyze(spec, opts);

    table.check<long long>("ind at origin", -1, owner_index(cert, "origin").brouwer);
    table.check<long long>("ind at c1+", 1, owner_index(cert, "c1+").brouwer);
    table.check<long long>("ind at c1-", 1, owner_index(cert, "c1-").brouwer);
    table.check<long long>("ind at infinity", 1, cert.at_infinity.brouwer);
    if (id == "6.6")
        table.check<std::string>("origin provenance", "sum-residual",
                                 cert.provenance.at("brouwer:origin"));

    const SymMatrix& origin_h = spec.find_point("origin")->hessian;
    for (int k = 1; k <= 3; ++k) {
        table.check<long long>("count(origin Hessian, k=" + std::to_string(k) + ")",
                               k <= 2 ? 1 : 0, table_count(origin_h, kTwoPi, k));
        table.check<long long>("count(infinity Hessian, k=" + std::to_string(k) + ")",
                               k == 1 ? 1 : 0, table_count(spec.v_inf, kTwoPi, k));
        table.check<long long>("count(pair Hessian, k=" + std::to_string(k) + ")", k == 1 ? 1 : 0,
                               table_count(spec.find_point("c1+")->hessian, kTwoPi, k));
    }
    {
        std::ostringstream want, got;
        want << std::set<int>{1}.size() << ":1";
        const auto& modes = owner_index(cert, "origin").resonant_modes;
        got << modes.size() << ":" << (modes.count(1) ? 1 : 0);
        table.check<std::string>("resonant modes at origin = {1}", want.str(), got.str());
    }
    table.check<std::string>("verdict", "proven", to_string(cert.verdict));
    table.check<int>("witness k", 2, cert.witness_k.value_or(-1));
    table.check<long long>("witness lhs", 0, cert.lhs);
    table.check<long long>("witness rhs", -1, cert.rhs);
}

void reproduce_sitnikov(DiffTable& table, const Tolerances& tols) {
    const ModelPotential m = reference_model("6.7");
    table.check<double>("Hessian at the origin", 8.0, m.hessian({0.0}).at(0, 0));

    AnalyzeOptions opts;
    opts.tols = tols;
    const ExistenceCertificate at_small = analyze(build_system(m, 1.0, tols), opts);
    table.check<std::string>("verdict at T=1.0", "not-decided", to_string(at_small.verdict));
    const ExistenceCertificate at_23 = analyze(build_system(m, 2.3, tols), opts);
    table.check<std::string>("verdict at T=2.3", "proven", to_string(at_23.verdict));
    const ExistenceCertificate at_2pi = analyze(build_system(m, kTwoPi, tols), opts);
    table.check<std::string>("verdict at T=2pi", "proven", to_string(at_2pi.verdict));
    table.check<int>("witness k at T=2pi", 1, at_2pi.witness_k.value_or(-1));
    table.check<long long>("witness lhs", 0, at_2pi.lhs);
    table.check<long long>("witness rhs", -1, at_2pi.rhs);
    for (int k = 1; k <= 3; ++k)
        table.check<long long>("count(8, T=2pi, k=" + std::to_string(k) + ")", k <= 2 ? 1 : 0,
                               table_count(SymMatrix::diagonal({8.0}), kTwoPi, k));
}

void reproduce_continuation(const std::string& id, DiffTable& table, const Tolerances& tols) {
    const ModelPotential m = reference_model(id);
    const double period = kTwoPi;
    AnalyzeOptions opts;
    opts.tols = tols;
    const ContinuationCertificate cont = continuation_certificate(build_system(m, period, tols), opts);
    table.check<std::string>("continuation certificate emitted", "yes", "yes");
    if (id == "6.8") {
        table.check<int>("witness k", 2, cont.witness_k);
        table.check<std::string>("strong form", "no", cont.strong_form ? "yes" : "no");
    } else {
        table.check<int>("witness k", 1, cont.witness_k);
        table.check<std::string>("strong form", "yes", cont.strong_form ? "yes" : "no");
    }
    table.check<std::string>("symmetry breaking possible", "yes",
                             cont.symmetry_breaking_possible ? "yes" : "no");
}

int run_reproduce(const std::string& id, const CommonOptions& opt) {
    DiffTable table;
    const Tolerances tols = opt.tolerances();
    if (id == "6.5" || id == "6.6")
        reproduce_four_dim(id, table, tols);
    else if (id == "6.7")
        reproduce_sitnikov(table, tols);
    else if (id == "6.8" || id == "6.9")
        reproduce_continuation(id, table, tols);
    else
        throw std::runtime_error("unknown reference case '" + id + "' (expected 6.5 ... 6.9)");

    std::cout << "reference case " << id << ":\n";
    table.print(std::cout);
    std::cout << (table.all_ok() ? "all values match\n" : "MISMATCHES FOUND\n");
    return table.all_ok() ? 0 : 1;
}

int run_selftest(const CommonOptions& opt) {
    int failures = 0;
    std::mt19937_64 rng(opt.seed);

    // ring laws on a quick random sample
    {
        bool ok = true;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            std::uniform_int_distribution<int> coord(-10, 10);
            RingElement a(12), b(12), c(12);
            for (auto* e : {&a, &b, &c}) {
                e->set_so2(coord(rng));
                for (int k = 1; k <= 12; k += 1 + static_cast<int>(rng() % 4))
                    e->set_zk(k, coord(rng));
            }
            ok = star(a, b) == star(b, a) && star(star(a, b), c) == star(a, star(b, c)) &&
                 star(a, add(b, c)) == add(star(a, b), star(a, c));
        }
        std::cout << (ok ? "[pass]" : "[FAIL]") << " ring laws\n";
        failures += ok ? 0 : 1;
    }

    // the two degree routes on random non-resonant draws
    {
        bool ok = true;
        std::uniform_real_distribution<double> period_dist(0.5, 6.0);
        std::uniform_real_distribution<double> entry(-3.0, 3.0);
        int done = 0;
        while (done < 20 && ok) {
            const int n = 1 + static_cast<int>(rng() % 4);
            SymMatrix a(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double v = entry(rng);
                    a.at(i, j) = v;
                    a.at(j, i) = v;
                }
            try {
                const double period = period_dist(rng);
                ok = linear_degree(a, period) == linear_degree_via_product(a, period);
                ++done;
            } catch (const ResonanceError&) {
            }
        }
        std::cout << (ok ? "[pass]" : "[FAIL]") << " two-path degree equality\n";
        failures += ok ? 0 : 1;
    }

    // all bundled reference cases
    for (const std::string id : {"6.5", "6.6", "6.7", "6.8", "6.9"}) {
        DiffTable table;
        try {
            if (id == "6.5" || id == "6.6")
                reproduce_four_dim(id, table, opt.tolerances());
            else if (id == "6.7")
                reproduce_sitnikov(table, opt.tolerances());
            else
                reproduce_continuation(id, table, opt.tolerances());
        } catch (const std::exception& e) {
            std::cout << "[FAIL] reference case " << id << ": " << e.what() << "\n";
            ++failures;
            continue;
        }
        std::cout << (table.all_ok() ? "[pass]" : "[FAIL]") << " reference case " << id << "\n";
        failures += table.all_ok() ? 0 : 1;
    }

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivariant-degree existence certificates and a spectral orbit verifier for "
                 "autonomous second-order systems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOptions opt;

    auto* analyze_cmd = app.add_subcommand("analyze", "compute an existence certificate");
    add_common_flags(analyze_cmd, opt);

    auto* verify_cmd =
        app.add_subcommand("verify", "search and verify a periodic orbit for a proven certificate");
    add_common_flags(verify_cmd, opt);
    int verify_mode = 0;
    std::string csv_path;
    verify_cmd->add_option("--seed-mode", verify_mode, "force the seeded harmonic");
    verify_cmd->add_option("--csv", csv_path, "write sampled orbit points as CSV");

    auto* trace_cmd = app.add_subcommand("trace", "trace a continuation branch in the family parameter");
    add_common_flags(trace_cmd, opt);
    std::string family_name = "constant";
    double lambda_max = 0.0;
    trace_cmd->add_option("--family", family_name, "family: constant or coupling")
        ->check(CLI::IsMember({"constant", "coupling"}));
    trace_cmd->add_option("--lambda-max", lambda_max, "parameter bound for the UNBOUNDED verdict");

    auto* reproduce_cmd = app.add_subcommand("reproduce", "recompute a bundled reference case and diff it");
    std::string case_id;
    reproduce_cmd->add_option("id", case_id, "one of 6.5, 6.6, 6.7, 6.8, 6.9")->required();
    add_common_flags(reproduce_cmd, opt, false);

    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in quick checks");
    add_common_flags(selftest_cmd, opt, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze_cmd)) return run_analyze(opt);
        if (app.got_subcommand(verify_cmd)) return run_verify(opt, verify_mode, csv_path);
        if (app.got_subcommand(trace_cmd)) return run_trace(opt, family_name, lambda_max);
        if (app.got_subcommand(reproduce_cmd)) return run_reproduce(case_id, opt);
        if (app.got_subcommand(selftest_cmd)) return run_selftest(opt);
    } catch (const ResonanceError& e) {
        std::cerr << "error (resonance): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
