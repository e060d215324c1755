#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perideg/linalg.hpp"
#include "perideg/systems.hpp"

namespace perideg {

/// Truncated Fourier representation of a T-periodic loop in R^n:
///   u(t) = a0 + sum_{k=1..N} ac_k cos(2k pi t / T) + as_k sin(2k pi t / T).
struct FourierLoop {
    double period = 0.0;
    int n = 0;
    int modes = 0;  // N
    Vec a0;
    std::vector<Vec> ac;  // ac[k-1] is the cosine coefficient of mode k
    std::vector<Vec> as;

    static FourierLoop zero(int n, int modes, double period);

    Vec eval(double t) const;
    Vec eval_deriv(double t) const;
    Vec eval_second_deriv(double t) const;

    double coeff_norm() const;              // l2 over all coefficients
    double harmonic_norm() const;           // excludes a0
    double mode_norm(int k) const;          // sqrt(|ac_k|^2 + |as_k|^2)
    double h1_norm() const;

    /// The loop t -> u(t + shift); an exact coefficient rotation.
    FourierLoop time_shift(double shift) const;
};

struct GalerkinConfig {
    int modes = 64;
    double newton_tol = 1e-10;       // H1 norm of the projected gradient
    int newton_max_iters = 50;
    double ode_residual_tol = 1e-7;
    double periodicity_tol = 1e-6;
    double stationary_tol = 1e-4;
    double active_mode_rel_tol = 1e-6;
    double tail_rel_tol = 1e-3;
    int residual_grid = 2048;
    int rk4_steps = 10000;
    std::vector<double> amplitude_schedule = {0.1, 0.5, 1.0, 2.0};
};

struct OrbitResult {
    FourierLoop loop;
    double grad_norm = 0.0;
    double ode_residual = 0.0;
    double rk4_periodicity_defect = 0.0;
    double rk4_trajectory_gap = 0.0;
    double minimal_period = 0.0;
    int isotropy_k = 0;
    double distance_to_stationary = 0.0;
    bool accepted = false;
    std::string note;
    int newton_iters = 0;
    int seed_mode = 0;
    double seed_amplitude = 0.0;
    std::string seed_point;
};

/// Projection of the loop-space gradient of the action onto modes 0..N, in
/// the coordinates of FourierLoop.  The nonlinear term is integrated by the
/// trapezoidal rule on a 4N+4 grid, then rescaled mode-wise so that for the
/// quadratic potential 1/2 <A x, x> the map is block-diagonal with the
/// blocks of mode_block (and -A on mode 0).
FourierLoop galerkin_gradient(const SystemSpec& spec, const FourierLoop& u);

/// The discretized action evaluated with the same quadrature; the gradient
/// above is its exact derivative, which the finite-difference tests use.
double galerkin_energy(const SystemSpec& spec, const FourierLoop& u);

/// Dense Jacobian of galerkin_gradient in packed coordinates
/// (a0, ac_1..ac_N, as_1..as_N, each block of size n).
Mat galerkin_jacobian(const SystemSpec& spec, const FourierLoop& u);

/// Sup over a dense grid of |u'' + grad V(u)|_2.
double ode_residual(const SystemSpec& spec, const FourierLoop& u, int grid = 2048);

/// Classical fixed-step RK4 for x'' = -grad V(x); state y = (x, v).
/// Returns the trajectory sampled at every step (steps + 1 states).
std::vector<Vec> rk4_flow(const std::function<Vec(const Vec&)>& grad_v, const Vec& y0,
                          double t_end, int steps);

struct MinimalPeriod {
    double period = 0.0;
    int isotropy_k = 0;
};

/// gcd of the harmonics carrying more than active_mode_rel_tol of the
/// coefficient norm; the minimal period is T divided by it.
/// Throws std::domain_error on a (numerically) constant loop.
MinimalPeriod minimal_period_of(const FourierLoop& loop, double active_mode_rel_tol = 1e-6);

/// Newton search for a non-stationary orbit from a single seed: the loop
/// p + amplitude * cos(2 pi k t / T) * dir, where p is the stationary point
/// with the given id ("" = first point, origin if empty list) and dir is
/// picked from the Hessian eigenvectors most relevant to mode k.  The phase
/// is fixed by pinning one sine coefficient of the seed mode.
OrbitResult find_orbit(const SystemSpec& spec, int seed_mode, double seed_amplitude,
                       const GalerkinConfig& cfg = {}, const std::string& seed_point_id = "");

/// Runs find_orbit over the amplitude schedule and all stationary points
/// (those whose Hessian has eigenvalues above the witness threshold first);
/// returns the first accepted orbit, or the best rejected attempt.
OrbitResult find_orbit_auto(const SystemSpec& spec, int witness_k, const GalerkinConfig& cfg = {});

/// One-parameter family of potentials; member 0 must be the analyzed system.
struct PotentialFamily {
    std::function<double(const Vec&, double)> value;
    std::function<Vec(const Vec&, double)> gradient;
    std::function<SymMatrix(const Vec&, double)> hessian;
};

PotentialFamily constant_family(const PotentialBundle& base);
/// Model family with the attraction term scaled by (1 + lambda); the origin
/// stays stationary for every lambda.
PotentialFamily coupling_family(const ModelPotential& base);

struct TraceConfig {
    double step_init = 0.01;
    double step_min = 1e-4;
    double step_max = 0.1;
    double lambda_bound = 1000.0;
    double radius_bound_factor = 1000.0;  // times the system length scale
    int max_steps = 100000;
    double corrector_tol = 1e-9;
    int corrector_max_iters = 8;
    double stationary_tol = 1e-4;
    double active_mode_rel_tol = 1e-6;
};

enum class BranchVerdict { Unbounded, HitStationary, StepFailure };

std::string to_string(BranchVerdict v);

struct BranchSample {
    double lambda = 0.0;
    double loop_norm = 0.0;
    int isotropy_k = 0;
    double distance_to_stationary = 0.0;
};

struct BranchRecord {
    std::vector<BranchSample> samples;
    BranchVerdict verdict = BranchVerdict::StepFailure;
    bool symmetry_breaking = false;
    int direction = +1;
    std::string note;
};

/// Pseudo-arclength predictor-corrector over (loop, lambda) starting from an
/// accepted orbit of the member at lambda = 0.  Terminates UNBOUNDED when
/// the loop norm or |lambda| leaves the configured bounds, HIT_STATIONARY
/// when the loop approaches a stationary point, STEP_FAILURE when the
/// corrector diverges at the minimal step (branch truncated, not a verdict).
BranchRecord trace_branch(const PotentialFamily& family, const SystemSpec& spec0,
                          const OrbitResult& start, int direction, const TraceConfig& cfg = {});

}  // namespace perideg
