#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "perideg/ring.hpp"
#include "perideg/spectral.hpp"

namespace perideg {

/// Isotypic decomposition of a finite-dimensional circle representation:
/// pairs (multiplicity j_i >= 1, mode k_i >= 0) with strictly increasing k_i.
/// Mode 0 is the trivial summand.
struct RepresentationDescriptor {
    std::vector<std::pair<int, int>> summands;  // (multiplicity, mode)

    void add(int multiplicity, int mode);
    void validate() const;
    int trivial_multiplicity() const;
    int max_mode() const;
};

/// Degree of -Id on the ball of the given representation:
/// so2 coordinate (-1)^{j_0}, Z_{k_i} coordinate (-1)^{j_0} * j_i.
RingElement degree_of_minus_id(const RepresentationDescriptor& rep, int truncation_bound);

/// Equivariant degree of the linearized loop map for the system u'' = -A u:
/// so2 coordinate (-1)^{j_0}, Z_k coordinate (-1)^{j_0} * j_k for k up to the
/// mode cutoff, where j_k counts eigenvalues above the k-th threshold.
/// Requires a resonance-free pair (A, T), including a nonsingular A.
RingElement linear_degree(const SymMatrix& a, double period, const Tolerances& tols = {});

/// Same value computed along the other route: one -Id factor per eigenvalue
/// of the compact loop operator above 1, star-multiplied.  Must agree with
/// linear_degree exactly.
RingElement linear_degree_via_product(const SymMatrix& a, double period, const Tolerances& tols = {});

/// Local index of -grad at a nondegenerate critical point with Hessian h:
/// sign det(-h) = (-1)^{#positive eigenvalues}.  Throws if h is singular
/// within the cluster tolerance.
long long brouwer_index_nondegenerate(const SymMatrix& h, const Tolerances& tols = {});

using VectorField = std::function<Vec(const Vec&)>;

/// Topological degree of `field` over the sphere of the given radius around
/// `center`, by dense boundary sampling: sign change for n = 1, winding
/// number for n = 2, summed solid angles of image triangles for n = 3.
/// Throws if the field (numerically) vanishes on the sphere or n > 3.
long long brouwer_index_oracle(const VectorField& field, const Vec& center, double radius);

/// Index of -grad at infinity for the bundled model family:
/// (-1)^(n - morse_index(v_inf)).
long long index_at_infinity_sign(const SymMatrix& v_inf, int n, const Tolerances& tols = {});

/// Closure of a mode set under gcd: every gcd of a nonempty subset.
std::set<int> gcd_closure(const std::set<int>& modes);

/// Equivariant index of one stationary point (or of infinity).
///
/// Non-resonant case: value has so2 coordinate `brouwer` and Z_k coordinate
/// brouwer * j_k.  Resonant case: the coordinates at the gcd closure of the
/// resonant modes are undefined and recorded in `exclusion`.
struct EquivariantIndex {
    std::string owner;
    RingElement value;
    long long brouwer = 0;
    std::map<int, long long> jk;  // defined entries only, k in [0, k_cutoff]
    std::set<int> resonant_modes;  // k >= 1
    std::set<int> exclusion;       // gcd closure of resonant_modes
    bool singular_hessian = false;
    int k_cutoff = 0;

    bool resonant() const { return !resonant_modes.empty(); }
};

EquivariantIndex index_of_point(const std::string& owner, const SymMatrix& hessian,
                                long long brouwer, double period, const Tolerances& tols = {});

}  // namespace perideg
