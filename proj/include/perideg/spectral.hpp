#pragma once

#include <map>
#include <set>
#include <stdexcept>

#include "perideg/linalg.hpp"

namespace perideg {

/// Tolerance policy for eigenvalue clustering and resonance detection.
/// Both scale with 1 + ||A||_F.  Near-resonant eigenvalues are treated as
/// resonant, so borderline coordinates become undefined instead of wrong.
struct Tolerances {
    double cluster_scale = 1e-9;
    double resonance_scale = 1e-8;

    double cluster_tol(const SymMatrix& a) const { return cluster_scale * (1.0 + a.frobenius()); }
    double resonance_tol(const SymMatrix& a) const { return resonance_scale * (1.0 + a.frobenius()); }
};

/// Eigen-decomposition of a symmetric matrix with eigenvalues merged into
/// clusters: `eigenvalues` holds one representative per cluster, ascending,
/// with `multiplicities` summing to n; `basis` is orthogonal with columns
/// grouped accordingly.
struct SpectralData {
    int n = 0;
    std::vector<double> eigenvalues;
    std::vector<int> multiplicities;
    Mat basis;
    double cluster_tol = 0.0;

    /// Eigenvalues repeated per multiplicity, ascending.
    std::vector<double> expanded() const;
    int count_strictly_above(double threshold) const;
    double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
    /// Distance from `value` to the nearest eigenvalue.
    double nearest_gap(double value, double* matched = nullptr) const;
};

/// Cyclic Jacobi eigensolver.  Stops when the off-diagonal Frobenius norm
/// falls below 1e-13*(1+||A||_F); throws on non-convergence (pathological
/// input) and on dimension 0.
SpectralData eigen_sym(const SymMatrix& a, double cluster_tol = -1.0);

/// The k-th mode threshold 4 k^2 pi^2 / T^2.
double mode_threshold(double period, int k);

/// Smallest K such that the mode thresholds beyond K provably exceed every
/// eigenvalue: ceil(T * sqrt(max(lambda_max, 0)) / (2 pi)).
int mode_cutoff(double period, double lambda_max);

/// Raised when a computation would compare an eigenvalue sitting within the
/// resonance tolerance of a mode threshold.
class ResonanceError : public std::runtime_error {
public:
    ResonanceError(int mode, double eigenvalue, double threshold);
    int mode;
    double eigenvalue;
    double threshold;
};

/// Modes k with an eigenvalue within tol_res of the threshold 4k^2pi^2/T^2.
/// k = 0 present means the matrix itself is (numerically) singular.
struct ResonanceReport {
    std::set<int> resonant_ks;
    std::map<int, double> matched_eigenvalues;
    int k_cutoff = 0;
    double tol_res = 0.0;

    bool singular() const { return resonant_ks.count(0) > 0; }
    /// Resonant modes with k >= 1 (the ones feeding exclusion sets).
    std::set<int> positive_modes() const;
    bool clean() const { return resonant_ks.empty(); }
};

ResonanceReport resonance_report(const SpectralData& sd, double period, double tol_res);
ResonanceReport resonance_report(const SymMatrix& a, double period, const Tolerances& tols = {});

/// Total multiplicity of eigenvalues strictly above the k-th mode threshold.
/// Throws ResonanceError if an eigenvalue lies within tol_res of the
/// threshold; consult resonance_report first.
int eigenvalues_above_mode(const SpectralData& sd, double period, int k, double tol_res);
int eigenvalues_above_mode(const SymMatrix& a, double period, int k, const Tolerances& tols = {});

/// The k-th Fourier-mode block of the linearized loop gradient:
///   (4k^2pi^2 Id - T^2 A) / (4k^2pi^2 + T^2).
/// k = 0 yields -A, the action on constant loops.
SymMatrix mode_block(const SymMatrix& a, double period, int k);

struct MorseIndex {
    int index = 0;        // eigenvalues below -cluster_tol
    bool degenerate = false;  // some eigenvalue within cluster_tol of 0
};

MorseIndex morse_index(const SpectralData& sd);
MorseIndex morse_index(const SymMatrix& a, const Tolerances& tols = {});

}  // namespace perideg
