#include "perideg/systems.hpp"

#include <algorithm>
#include <cmath>

#include "perideg/eqdeg.hpp"

namespace perideg {

void SystemSpec::validate() const {
    if (n <= 0) throw std::invalid_argument("system: dimension must be positive");
    if (period <= 0.0) throw std::invalid_argument("system: period must be positive");
    if (v_inf.dim() != n) throw std::invalid_argument("system: v_inf dimension mismatch");
    double scale = 1.0;
    for (const auto& cp : critical_points) {
        if (static_cast<int>(cp.location.size()) != n)
            throw std::invalid_argument("system: point '" + cp.id + "' has wrong dimension");
        if (cp.hessian.dim() != n)
            throw std::invalid_argument("system: hessian of '" + cp.id + "' has wrong dimension");
        scale = std::max(scale, norm2(cp.location));
    }
    for (size_t i = 0; i < critical_points.size(); ++i) {
        for (size_t j = i + 1; j < critical_points.size(); ++j) {
            if (norm2(critical_points[i].location - critical_points[j].location) <= 1e-12 * (1.0 + scale))
                throw std::invalid_argument("system: points '" + critical_points[i].id + "' and '" +
                                            critical_points[j].id + "' coincide");
        }
    }
    if (potential.available()) {
        for (const auto& cp : critical_points) {
            const double g = norm2(potential.gradient(cp.location));
            if (g > 1e-8)
                throw std::invalid_argument("system: gradient at '" + cp.id + "' is " +
                                            std::to_string(g) + ", not a stationary point");
        }
    }
}

double SystemSpec::length_scale() const {
    double s = 1.0;
    for (const auto& cp : critical_points) s = std::max(s, norm2(cp.location));
    return s;
}

const CriticalPoint* SystemSpec::find_point(const std::string& id) const {
    for (const auto& cp : critical_points)
        if (cp.id == id) return &cp;
    return nullptr;
}

double ModelPotential::value(const Vec& x) const {
    const double q = dot(x, v_inf.apply(x));
    return 0.5 * q - 1.0 / std::sqrt(dot(x, x) + a);
}

Vec ModelPotential::gradient(const Vec& x) const {
    const double s = std::pow(dot(x, x) + a, -1.5);
    Vec g = v_inf.apply(x);
    for (int i = 0; i < n; ++i) g[i] += s * x[i];
    return g;
}

SymMatrix ModelPotential::hessian(const Vec& x) const {
    const double r2 = dot(x, x) + a;
    const double s3 = std::pow(r2, -1.5);
    const double s5 = std::pow(r2, -2.5);
    SymMatrix h = v_inf;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h.at(i, j) += -3.0 * x[i] * x[j] * s5 + (i == j ? s3 : 0.0);
        }
    }
    return h;
}

PotentialBundle ModelPotential::bundle() const {
    ModelPotential m = *this;
    return PotentialBundle{
        [m](const Vec& x) { return m.value(x); },
        [m](const Vec& x) { return m.gradient(x); },
        [m](const Vec& x) { return m.hessian(x); },
    };
}

std::vector<Vec> model_critical_points(const ModelPotential& m, const Tolerances& tols) {
    if (m.a <= 0.0) throw std::invalid_argument("model: a must be positive");
    if (m.v_inf.dim() != m.n) throw std::invalid_argument("model: v_inf dimension mismatch");

    const SpectralData sd = eigen_sym(m.v_inf, tols.cluster_tol(m.v_inf));
    const double floor = -std::pow(m.a, -1.5);
    const double boundary_tol = 1e-9 * (1.0 + std::abs(floor));

    std::vector<Vec> points;
    points.push_back(Vec(m.n, 0.0));

    int col = 0;
    for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
        const double lambda = sd.eigenvalues[c];
        const int mult = sd.multiplicities[c];
        // At the lower boundary the pair amplitude is exactly zero, so the
        // pair collapses onto the origin and contributes nothing new.
        if (std::abs(lambda - floor) <= boundary_tol) {
            col += mult;
            continue;
        }
        if (lambda > floor && lambda < 0.0) {
            if (mult > 1)
                throw std::domain_error("model: qualifying eigenvalue " + std::to_string(lambda) +
                                        " has multiplicity " + std::to_string(mult));
            const double amplitude = std::sqrt(1.0 / std::cbrt(lambda * lambda) - m.a);
            Vec q(m.n);
            for (int i = 0; i < m.n; ++i) q[i] = sd.basis.at(i, col);
            points.push_back(amplitude * q);
            points.push_back(-amplitude * q);
        }
        col += mult;
    }
    return points;
}

SystemSpec build_system(const ModelPotential& m, double period, const Tolerances& tols) {
    SystemSpec spec;
    spec.n = m.n;
    spec.period = period;
    spec.v_inf = m.v_inf;
    spec.potential = m.bundle();
    spec.model_a = m.a;
    spec.inf_brouwer_override = index_at_infinity_sign(m.v_inf, m.n, tols);

    const std::vector<Vec> points = model_critical_points(m, tols);
    int pair = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        CriticalPoint cp;
        cp.location = points[i];
        cp.hessian = m.hessian(points[i]);
        if (i == 0) {
            cp.id = "origin";
        } else {
            if (i % 2 == 1) ++pair;
            cp.id = "c" + std::to_string(pair) + (i % 2 == 1 ? "+" : "-");
        }
        spec.critical_points.push_back(std::move(cp));
    }
    spec.validate();
    return spec;
}

}  // namespace perideg
