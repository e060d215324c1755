#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perideg/linalg.hpp"
#include "perideg/spectral.hpp"

namespace perideg {

/// Callback bundle for a C^2 potential.  All three callbacks must be
/// stateless; they may be invoked concurrently.
struct PotentialBundle {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<SymMatrix(const Vec&)> hessian;

    bool available() const { return static_cast<bool>(gradient); }
};

struct CriticalPoint {
    std::string id;
    Vec location;
    SymMatrix hessian;
    std::optional<long long> brouwer_override;
};

/// Full input to the degree pipeline: dimension, period, the Hessian at
/// infinity, the finite list of stationary points with their Hessians, and
/// (optionally) the potential callbacks for the numerical verifier.
struct SystemSpec {
    int n = 0;
    double period = 0.0;
    SymMatrix v_inf;
    std::vector<CriticalPoint> critical_points;
    PotentialBundle potential;
    std::optional<long long> inf_brouwer_override;
    std::optional<double> model_a;  // present when the spec comes from the bundled model family

    /// Checks pairwise-distinct locations, dimensions, and (when callbacks
    /// are present) that the gradient vanishes at every listed point.
    void validate() const;

    /// Seed-amplitude scale for the orbit search: max(1, max |p|).
    double length_scale() const;

    const CriticalPoint* find_point(const std::string& id) const;
};

/// The bundled model family
///   V(x) = 1/2 <v_inf x, x> - 1/sqrt(|x|^2 + a),   a > 0,
/// with closed-form gradient, Hessian and stationary set.
struct ModelPotential {
    SymMatrix v_inf;
    double a = 1.0;
    int n = 0;

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    SymMatrix hessian(const Vec& x) const;
    PotentialBundle bundle() const;
};

/// All stationary points of the model potential: the origin, plus a pair
/// +-r_i q_i for every simple eigenvalue lambda_i of v_inf in
/// (-a^(-3/2), 0), where r_i = sqrt(lambda_i^(-2/3) - a) and q_i is the
/// eigenvector.  An eigenvalue at the lower boundary has pair amplitude
/// exactly zero, so it adds no points; a repeated eigenvalue strictly
/// inside the interval is rejected (the stationary set would not be
/// finite).
std::vector<Vec> model_critical_points(const ModelPotential& m, const Tolerances& tols = {});

/// Assembles the full pipeline input for the model potential, including the
/// closed-form index at infinity.
SystemSpec build_system(const ModelPotential& m, double period, const Tolerances& tols = {});

}  // namespace perideg
