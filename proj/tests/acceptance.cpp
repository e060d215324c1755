// Acceptance suite: one check per shipping criterion, each printed as a
// PASS/FAIL line with its runtime.  Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "perideg/certify.hpp"
#include "perideg/galerkin.hpp"
#include "perideg/json_io.hpp"

using namespace perideg;

namespace {

const double kTwoPi = 2.0 * M_PI;

struct Criterion {
    int number;
    std::string title;
    double time_limit_s;
    std::function<void(std::ostringstream&)> run;  // throws on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want;
        throw Failure(os.str());
    }
}

const EquivariantIndex& point_index(const ExistenceCertificate& cert, const std::string& id) {
    for (const auto& idx : cert.points)
        if (idx.owner == id) return idx;
    throw Failure("no index for owner " + id);
}

/// Strict eigenvalue count over the k-th threshold straight from the
/// spectrum; used to check the printed count tables including resonant k.
long long raw_count(const SymMatrix& a, double period, int k) {
    return eigen_sym(a).count_strictly_above(mode_threshold(period, k));
}

// ---------------------------------------------------------------- 1 and 2

void run_case_resonant(std::ostringstream& log) {
    const SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    const ExistenceCertificate cert = analyze(spec);

    require_eq(point_index(cert, "origin").brouwer, -1LL, "ind at origin");
    require_eq(point_index(cert, "c1+").brouwer, 1LL, "ind at +pair point");
    require_eq(point_index(cert, "c1-").brouwer, 1LL, "ind at -pair point");
    require_eq(cert.at_infinity.brouwer, 1LL, "ind at infinity");

    const SymMatrix& h_origin = spec.find_point("origin")->hessian;
    for (int k = 1; k <= 3; ++k) {
        require_eq(raw_count(h_origin, kTwoPi, k), k <= 2 ? 1LL : 0LL, "count table at origin");
        require_eq(raw_count(spec.v_inf, kTwoPi, k), k == 1 ? 1LL : 0LL, "count table at infinity");
        require_eq(raw_count(spec.find_point("c1+")->hessian, kTwoPi, k), k == 1 ? 1LL : 0LL,
                   "count table at the pair points");
    }
    require(point_index(cert, "origin").resonant_modes == std::set<int>{1},
            "resonance set at the origin");

    require(cert.verdict == Verdict::Proven, "verdict");
    require_eq(*cert.witness_k, 2, "witness coordinate");
    require_eq(cert.lhs, 0LL, "witness lhs");
    require_eq(cert.rhs, -1LL, "witness rhs");
    log << "witness k=2 with 0 != -1";
}

void run_case_singular(std::ostringstream& log) {
    const SystemSpec spec = build_system(testutil::model_singular_origin(), kTwoPi);

    const MorseIndex origin_morse = morse_index(spec.find_point("origin")->hessian);
    require(origin_morse.degenerate, "origin Hessian must be singular");

    const ExistenceCertificate cert = analyze(spec);
    require_eq(point_index(cert, "origin").brouwer, -1LL, "ind at origin via additivity");
    require_eq(cert.provenance.at("brouwer:origin"), std::string("sum-residual"),
               "origin index provenance");
    require(cert.verdict == Verdict::Proven, "verdict");
    require_eq(*cert.witness_k, 2, "witness coordinate");
    require_eq(cert.lhs, 0LL, "witness lhs");
    require_eq(cert.rhs, -1LL, "witness rhs");
    log << "singular origin recovered as -1, witness k=2";
}

// --------------------------------------------------------------------- 3

void run_sitnikov_certificates(std::ostringstream& log) {
    const ModelPotential m = testutil::sitnikov();
    require(m.hessian({0.0}).at(0, 0) == 8.0, "Hessian at the origin must be exactly 8");

    const ExistenceCertificate c1 = analyze(build_system(m, 1.0));
    require(c1.verdict == Verdict::NotDecided, "T=1.0 must be not-decided");
    const ExistenceCertificate c2 = analyze(build_system(m, 2.3));
    require(c2.verdict == Verdict::Proven, "T=2.3 must be proven");
    const ExistenceCertificate c3 = analyze(build_system(m, kTwoPi));
    require(c3.verdict == Verdict::Proven, "T=2pi must be proven");
    require_eq(*c3.witness_k, 1, "witness at T=2pi");
    require_eq(c3.lhs, 0LL, "lhs at T=2pi");
    require_eq(c3.rhs, -1LL, "rhs at T=2pi");

    // the count flips across T = pi/sqrt(2), and the threshold itself is resonant
    const double critical = M_PI / std::sqrt(2.0);
    const SymMatrix eight = SymMatrix::diagonal({8.0});
    require_eq(eigenvalues_above_mode(eight, critical * (1.0 - 1e-6), 1), 0, "count below the flip");
    require_eq(eigenvalues_above_mode(eight, critical * (1.0 + 1e-6), 1), 1, "count above the flip");
    bool resonant_at_flip = false;
    try {
        eigenvalues_above_mode(eight, critical, 1);
    } catch (const ResonanceError&) {
        resonant_at_flip = true;
    }
    require(resonant_at_flip, "the flip period itself must be flagged resonant");
    log << "not-decided / proven / proven with the flip at pi/sqrt(2)";
}

// --------------------------------------------------------------------- 4

void run_orbit_verification(std::ostringstream& log) {
    const ModelPotential m = testutil::sitnikov();
    const SystemSpec spec = build_system(m, kTwoPi);
    const OrbitResult orbit = find_orbit_auto(spec, 1);
    require(orbit.accepted, "orbit search must accept: " + orbit.note);
    require(orbit.ode_residual <= 1e-7, "ode residual above 1e-7");
    require(orbit.rk4_periodicity_defect <= 1e-6, "periodicity defect above 1e-6");
    require(orbit.distance_to_stationary > 1e-4, "orbit must be non-stationary");
    require(orbit.minimal_period == kTwoPi, "minimal period must be the full period");

    // independent shooting check: release at rest from amplitude A and tune A
    // until the velocity vanishes again at the half period
    const double half = spec.period / 2.0;
    auto half_period_velocity = [&](double amplitude) {
        const auto traj = rk4_flow(spec.potential.gradient, {amplitude, 0.0}, half, 20000);
        return traj.back()[1];
    };
    const double a_star = orbit.loop.eval(0.0)[0];
    double lo = 0.8 * a_star, hi = 1.2 * a_star;
    double flo = half_period_velocity(lo), fhi = half_period_velocity(hi);
    require(flo * fhi < 0.0, "shooting bracket must straddle the orbit");
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = half_period_velocity(mid);
        if (flo * fmid <= 0.0) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    const double a_shoot = 0.5 * (lo + hi);

    const int steps = 20000;
    const auto traj = rk4_flow(spec.potential.gradient, {a_shoot, 0.0}, spec.period, steps);
    double gap = 0.0;
    for (int s = 0; s <= steps; ++s) {
        const double t = spec.period * s / steps;
        gap = std::max(gap, std::abs(traj[s][0] - orbit.loop.eval(t)[0]));
    }
    require(gap <= 1e-6, "shooting trajectory deviates by " + std::to_string(gap));
    log << "orbit amplitude " << a_star << ", shooting gap " << gap;
}

// --------------------------------------------------------------------- 5

void run_ring_laws(std::ostringstream& log) {
    std::mt19937_64 rng(20250809);
    for (int trial = 0; trial < 10000; ++trial) {
        const RingElement a = testutil::random_ring(rng);
        const RingElement b = testutil::random_ring(rng);
        const RingElement c = testutil::random_ring(rng);
        require(add(a, b) == add(b, a), "addition must commute");
        require(star(a, b) == star(b, a), "star must commute");
        require(add(add(a, b), c) == add(a, add(b, c)), "addition must associate");
        require(star(star(a, b), c) == star(a, star(b, c)), "star must associate");
        require(star(a, add(b, c)) == add(star(a, b), star(a, c)), "star must distribute");
        require(star(a, RingElement::one()) == a, "the unit must be neutral");
        require(add(a, RingElement::zero()) == a, "zero must be neutral");
        require(scalar_mul(-1, scalar_mul(-1, a)) == a, "scalar involution");
    }
    log << "10000 random triples, exact arithmetic";
}

// --------------------------------------------------------------------- 6

void run_two_path_equality(std::ostringstream& log) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> period_dist(0.5, 8.0);
    int done = 0, draws = 0;
    while (done < 200) {
        require(++draws < 4000, "too many resonant draws");
        const int n = 1 + static_cast<int>(rng() % 6);
        const SymMatrix a = testutil::random_sym(rng, n, 4.0);
        const double period = period_dist(rng);
        try {
            const RingElement direct = linear_degree(a, period);
            const RingElement product = linear_degree_via_product(a, period);
            require(direct == product, "degree routes disagree");
            ++done;
        } catch (const ResonanceError&) {
        }
    }
    log << "200 non-resonant draws, exact equality";
}

// --------------------------------------------------------------------- 7

void run_so2_nullity(std::ostringstream& log) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ev(-2.2, 2.8);
    std::uniform_real_distribution<double> adist(0.4, 1.6);
    std::uniform_real_distribution<double> tdist(1.0, 7.0);

    int done = 0, with_difference = 0, guard = 0;
    while (done < 100) {
        require(++guard < 3000, "generator failed to produce enough systems");
        const int n = 2 + static_cast<int>(rng() % 3);
        ModelPotential m;
        m.n = n;
        m.a = adist(rng);
        const double floor = -std::pow(m.a, -1.5);
        Vec diag_vals(n);
        bool ok = true;
        for (double& v : diag_vals) {
            v = ev(rng);
            if (std::abs(v) < 0.05 || std::abs(v - floor) < 0.05) ok = false;
        }
        if (!ok) continue;
        // rotate the planted spectrum by a random orthogonal basis
        const SpectralData rot = eigen_sym(testutil::random_sym(rng, n));
        Mat d(n, n);
        for (int i = 0; i < n; ++i) d.at(i, i) = diag_vals[i];
        const Mat dense = matmul(matmul(rot.basis, d), rot.basis.transpose());
        SymMatrix v_inf(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                v_inf.at(i, j) = 0.5 * (dense.at(i, j) + dense.at(j, i));
        m.v_inf = v_inf;

        try {
            const SystemSpec spec = build_system(m, tdist(rng));
            const ExistenceCertificate cert = analyze(spec);
            require(cert.so2_infinity == cert.so2_sum,
                    "so2 coordinate of the difference must vanish");
            for (const auto& row : cert.table)
                if (row.lhs != row.rhs) {
                    ++with_difference;
                    break;
                }
            ++done;
        } catch (const std::exception&) {
            // degenerate draw (boundary eigenvalue, unresolved index): resample
        }
    }
    require(with_difference > 0, "no instance showed a nonzero harmonic difference");
    log << "100 systems, so2 difference always 0, " << with_difference
        << " with a harmonic difference";
}

// --------------------------------------------------------------------- 8

void run_gradient_checks(std::ostringstream& log) {
    std::mt19937_64 rng(515151);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    const SystemSpec sit = build_system(testutil::sitnikov(), kTwoPi);
    const SystemSpec big = build_system(testutil::model_resonant_origin(), kTwoPi);

    auto random_loop = [&](int n, int modes, double period) {
        FourierLoop loop = FourierLoop::zero(n, modes, period);
        for (int i = 0; i < n; ++i) loop.a0[i] = 0.3 * u(rng);
        for (int k = 1; k <= modes; ++k)
            for (int i = 0; i < n; ++i) {
                loop.ac[k - 1][i] = u(rng) / (1.0 + k * k);
                loop.as[k - 1][i] = u(rng) / (1.0 + k * k);
            }
        return loop;
    };
    auto h1_inner = [](const FourierLoop& x, const FourierLoop& y) {
        const double w = 2.0 * M_PI / x.period;
        double s = x.period * dot(x.a0, y.a0);
        for (int k = 1; k <= x.modes; ++k)
            s += 0.5 * x.period * (1.0 + w * k * w * k) *
                 (dot(x.ac[k - 1], y.ac[k - 1]) + dot(x.as[k - 1], y.as[k - 1]));
        return s;
    };

    const double h = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
        const SystemSpec& spec = (trial % 2 == 0) ? sit : big;
        const FourierLoop x = random_loop(spec.n, 12, spec.period);
        const FourierLoop v = random_loop(spec.n, 12, spec.period);
        const double pairing = h1_inner(galerkin_gradient(spec, x), v);

        FourierLoop xp = x, xm = x;
        for (int i = 0; i < spec.n; ++i) {
            xp.a0[i] += h * v.a0[i];
            xm.a0[i] -= h * v.a0[i];
        }
        for (int k = 1; k <= x.modes; ++k)
            for (int i = 0; i < spec.n; ++i) {
                xp.ac[k - 1][i] += h * v.ac[k - 1][i];
                xm.ac[k - 1][i] -= h * v.ac[k - 1][i];
                xp.as[k - 1][i] += h * v.as[k - 1][i];
                xm.as[k - 1][i] -= h * v.as[k - 1][i];
            }
        const double fd = (galerkin_energy(spec, xp) - galerkin_energy(spec, xm)) / (2.0 * h);
        require(std::abs(pairing - fd) <= 1e-6 * (1.0 + std::abs(fd)),
                "gradient disagrees with the finite difference of the action");
    }

    // quadratic potential: the Jacobian must be exactly block diagonal
    const SymMatrix a = testutil::random_sym(rng, 3, 2.5);
    SystemSpec quad;
    quad.n = 3;
    quad.period = 2.9;
    quad.v_inf = a;
    CriticalPoint origin;
    origin.id = "origin";
    origin.location = Vec(3, 0.0);
    origin.hessian = a;
    quad.critical_points.push_back(origin);
    SymMatrix acopy = a;
    quad.potential = PotentialBundle{
        [acopy](const Vec& x) { return 0.5 * dot(x, acopy.apply(x)); },
        [acopy](const Vec& x) { return acopy.apply(x); },
        [acopy](const Vec&) { return acopy; },
    };
    const int modes = 16;
    FourierLoop lp = random_loop(3, modes, quad.period);
    const Mat jac = galerkin_jacobian(quad, lp);
    const int n = 3;
    double worst = 0.0;
    for (int p = 0; p <= 2 * modes; ++p) {
        const int k = p == 0 ? 0 : (p <= modes ? p : p - modes);
        const SymMatrix want = mode_block(a, quad.period, k);
        for (int q = 0; q <= 2 * modes; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double got = jac.at(p * n + i, q * n + j);
                    const double ref = (p == q) ? want.at(i, j) : 0.0;
                    worst = std::max(worst, std::abs(got - ref));
                }
    }
    require(worst <= 1e-12, "quadratic Jacobian deviates from the mode blocks by " +
                                std::to_string(worst));
    log << "50 gradient probes, Jacobian block deviation " << worst;
}

// --------------------------------------------------------------------- 9

void run_brouwer_agreement(std::ostringstream& log) {
    std::mt19937_64 rng(909090);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int done = 0;
    while (done < 100) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const SymMatrix h = testutil::random_sym(rng, n, 2.0);
        long long expected;
        try {
            expected = brouwer_index_nondegenerate(h);
        } catch (const std::domain_error&) {
            continue;
        }
        Vec center(n);
        for (double& c : center) c = u(rng);
        const VectorField field = [&h, &center](const Vec& x) {
            Vec shifted(x.size());
            for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - center[i];
            Vec g = h.apply(shifted);
            for (double& v : g) v = -v;
            return g;
        };
        require(brouwer_index_oracle(field, center, 1.0) == expected,
                "boundary oracle disagrees with the sign-determinant formula");
        ++done;
    }
    log << "100 Hessians, n up to 3, exact agreement";
}

// -------------------------------------------------------------------- 10

void run_continuation_smoke(std::ostringstream& log) {
    const ModelPotential m = testutil::sitnikov();
    const SystemSpec spec = build_system(m, kTwoPi);
    GalerkinConfig cfg;
    cfg.modes = 96;
    const OrbitResult orbit = find_orbit(spec, 1, 1.0, cfg);
    require(orbit.accepted, "starting orbit must be accepted: " + orbit.note);

    TraceConfig tc;
    tc.lambda_bound = 10.0;
    const BranchRecord branch = trace_branch(constant_family(spec.potential), spec, orbit, +1, tc);
    require(branch.verdict == BranchVerdict::Unbounded,
            "constant family must run out of the parameter box, got " + to_string(branch.verdict));
    require(branch.samples.size() > 10, "branch must record samples");
    for (const auto& s : branch.samples)
        require(s.isotropy_k == branch.samples.front().isotropy_k,
                "isotropy log must stay constant along the constant family");
    require(!branch.symmetry_breaking, "no symmetry breaking on the constant family");
    log << branch.samples.size() << " samples to |lambda| > 10, isotropy constant";
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "four-dimensional resonant reference case", 1.0, run_case_resonant},
        {2, "singular-origin variant via the additivity residual", 1.0, run_case_singular},
        {3, "sitnikov certificates and the period flip", 1.0, run_sitnikov_certificates},
        {4, "sitnikov orbit with independent shooting check", 30.0, run_orbit_verification},
        {5, "ring laws on 10^4 random triples", 5.0, run_ring_laws},
        {6, "two-path degree equality on 200 draws", 10.0, run_two_path_equality},
        {7, "so2 nullity over 100 random model systems", 60.0, run_so2_nullity},
        {8, "gradient and Jacobian discretization checks", 30.0, run_gradient_checks},
        {9, "boundary oracle vs sign-determinant indices", 30.0, run_brouwer_agreement},
        {10, "continuation smoke test on the constant family", 60.0, run_continuation_smoke},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run(detail);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && elapsed > c.time_limit_s) {
            std::ostringstream os;
            os << "time limit " << c.time_limit_s << " s exceeded";
            error = os.str();
        }
        const bool pass = error.empty();
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", c.number,
                    c.title.c_str(), elapsed,
                    pass ? (detail.str().empty() ? "" : " -- ") : " -- ",
                    pass ? detail.str().c_str() : error.c_str());
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
