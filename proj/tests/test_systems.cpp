#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "perideg/systems.hpp"

using namespace perideg;
using testutil::diag;

namespace {

const double kTwoPi = 2.0 * M_PI;

Vec random_point(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec x(n);
    for (double& v : x) v = u(rng);
    return x;
}

}  // namespace

TEST_CASE("model gradient vanishes at the closed-form stationary points") {
    const ModelPotential m = testutil::model_resonant_origin();
    CHECK(norm2(m.gradient(Vec(4, 0.0))) == 0.0);
    CHECK(norm2(m.gradient({0.0, 0.0, 0.0, 1.0})) <= 1e-14);
    CHECK(norm2(m.gradient({0.0, 0.0, 0.0, -1.0})) <= 1e-14);
}

TEST_CASE("model gradient matches central differences of the value") {
    std::mt19937_64 rng(31);
    const ModelPotential m = testutil::model_resonant_origin();
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = random_point(rng, m.n, 2.0);
        const Vec g = m.gradient(x);
        for (int i = 0; i < m.n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (m.value(xp) - m.value(xm)) / (2.0 * h);
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("model hessian matches the reference values") {
    const ModelPotential m = testutil::model_resonant_origin();
    const SymMatrix at_origin = m.hessian(Vec(4, 0.0));
    const SymMatrix expected = diag({4.5, -1.0, 1.0, 1.0 - 1.0 / (2.0 * std::sqrt(2.0))});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(at_origin.at(i, j) == doctest::Approx(expected.at(i, j)).epsilon(1e-14));

    const double c = 1.0 / (2.0 * std::sqrt(2.0));
    const SymMatrix side = m.hessian({0.0, 0.0, 0.0, 1.0});
    const SymMatrix side_expected = diag({3.5 + c, -2.0 + c, c, -3.0 / (4.0 * std::sqrt(2.0))});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(side.at(i, j) == doctest::Approx(side_expected.at(i, j)).epsilon(1e-13));

    const ModelPotential sit = testutil::sitnikov();
    CHECK(sit.hessian({0.0}).at(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("model hessian is the jacobian of the gradient") {
    std::mt19937_64 rng(37);
    const ModelPotential m = testutil::model_singular_origin();
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = random_point(rng, m.n, 1.5);
        const SymMatrix hess = m.hessian(x);
        for (int j = 0; j < m.n; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const Vec gp = m.gradient(xp), gm = m.gradient(xm);
            for (int i = 0; i < m.n; ++i)
                CHECK(hess.at(i, j) == doctest::Approx((gp[i] - gm[i]) / (2.0 * h)).epsilon(1e-5));
        }
    }
}

TEST_CASE("stationary set of the reference four-dimensional case") {
    const auto points = model_critical_points(testutil::model_resonant_origin());
    REQUIRE(points.size() == 3);
    CHECK(norm2(points[0]) == 0.0);
    // the qualifying eigenvalue -1/(2 sqrt 2) has unit amplitude along e4
    for (size_t i = 1; i < points.size(); ++i) {
        CHECK(std::abs(points[i][3]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(points[i][0]) <= 1e-12);
        CHECK(std::abs(points[i][1]) <= 1e-12);
        CHECK(std::abs(points[i][2]) <= 1e-12);
    }
    CHECK(norm2(points[1] + points[2]) <= 1e-12);  // a +- pair
}

TEST_CASE("stationary set collapses to the origin without qualifying eigenvalues") {
    ModelPotential m;
    m.n = 3;
    m.a = 1.0;
    m.v_inf = diag({2.0, 0.5, -3.0});  // -3 lies below -a^(-3/2) = -1
    const auto points = model_critical_points(m);
    REQUIRE(points.size() == 1);
    CHECK(norm2(points[0]) == 0.0);

    const auto sit = model_critical_points(testutil::sitnikov());
    REQUIRE(sit.size() == 1);
    CHECK(norm2(sit[0]) == 0.0);
}

TEST_CASE("boundary eigenvalues collapse onto the origin, repeated ones are rejected") {
    // at the lower boundary the pair amplitude is exactly zero
    ModelPotential boundary;
    boundary.n = 2;
    boundary.a = 1.0;
    boundary.v_inf = diag({1.0, -1.0});  // -1 = -a^(-3/2) exactly
    const auto points = model_critical_points(boundary);
    REQUIRE(points.size() == 1);
    CHECK(norm2(points[0]) == 0.0);

    ModelPotential repeated;
    repeated.n = 2;
    repeated.a = 1.0;
    repeated.v_inf = diag({-0.5, -0.5});
    CHECK_THROWS_AS(model_critical_points(repeated), std::domain_error);
}

TEST_CASE("every emitted stationary point annihilates the gradient") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ev(-2.2, 2.5);
    std::uniform_real_distribution<double> adist(0.4, 2.0);
    int done = 0;
    while (done < 30) {
        ModelPotential m;
        m.n = 3;
        m.a = adist(rng);
        m.v_inf = diag({ev(rng), ev(rng), ev(rng)});
        std::vector<Vec> points;
        try {
            points = model_critical_points(m);
        } catch (const std::domain_error&) {
            continue;
        }
        for (const auto& p : points)
            CHECK(norm2(m.gradient(p)) <= 1e-10 * (1.0 + m.v_inf.frobenius()));
        ++done;
    }
}

TEST_CASE("build_system assembles the full pipeline input") {
    const SystemSpec spec = build_system(testutil::model_resonant_origin(), kTwoPi);
    CHECK(spec.n == 4);
    CHECK(spec.period == doctest::Approx(kTwoPi));
    REQUIRE(spec.critical_points.size() == 3);
    CHECK(spec.critical_points[0].id == "origin");
    CHECK(spec.inf_brouwer_override.has_value());
    CHECK(*spec.inf_brouwer_override == 1);
    CHECK(spec.potential.available());
    CHECK(spec.model_a.has_value());
    spec.validate();

    const SystemSpec sit = build_system(testutil::sitnikov(), kTwoPi);
    CHECK(sit.critical_points.size() == 1);
    CHECK(*sit.inf_brouwer_override == -1);
}

TEST_CASE("spec validation rejects broken input") {
    SystemSpec spec = build_system(testutil::sitnikov(), kTwoPi);
    spec.critical_points.push_back(spec.critical_points.front());  // duplicate location
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    SystemSpec bad = build_system(testutil::sitnikov(), kTwoPi);
    bad.critical_points[0].location = {0.3};  // not stationary
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
