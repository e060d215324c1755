#pragma once

#include <cmath>
#include <random>

#include "perideg/ring.hpp"
#include "perideg/systems.hpp"

namespace testutil {

using perideg::ModelPotential;
using perideg::RingElement;
using perideg::SymMatrix;
using perideg::Vec;

inline SymMatrix diag(const Vec& d) { return SymMatrix::diagonal(d); }

/// Four-dimensional model case with a resonant origin: the Hessian there
/// has eigenvalue 1, which is the first mode threshold at period 2*pi.
inline ModelPotential model_resonant_origin() {
    ModelPotential m;
    m.n = 4;
    m.a = 1.0;
    m.v_inf = diag({3.5, -2.0, 0.0, -1.0 / (2.0 * std::sqrt(2.0))});
    return m;
}

/// Variant whose Hessian at the origin is singular on top of the resonance,
/// so the local index there is only reachable through the additivity
/// residual.
inline ModelPotential model_singular_origin() {
    ModelPotential m;
    m.n = 4;
    m.a = 1.0;
    m.v_inf = diag({3.5, -1.0, 0.0, -1.0 / (2.0 * std::sqrt(2.0))});
    return m;
}

/// Circular Sitnikov configuration: scalar, v_inf = 0, a = 1/4.
inline ModelPotential sitnikov() {
    ModelPotential m;
    m.n = 1;
    m.a = 0.25;
    m.v_inf = SymMatrix(1);
    return m;
}

inline RingElement make_ring(long long so2, std::initializer_list<std::pair<int, long long>> zk,
                             int trunc = 16) {
    RingElement e(trunc);
    e.set_so2(so2);
    for (const auto& [k, v] : zk) e.set_zk(k, v);
    return e;
}

inline RingElement random_ring(std::mt19937_64& rng, int trunc = 16) {
    std::uniform_int_distribution<int> coord(-10, 10);
    std::uniform_int_distribution<int> fill(0, 3);
    RingElement e(trunc);
    e.set_so2(coord(rng));
    for (int k = 1; k <= trunc; ++k)
        if (fill(rng) == 0) e.set_zk(k, coord(rng));
    return e;
}

inline SymMatrix random_sym(std::mt19937_64& rng, int n, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = u(rng);
            a.at(i, j) = v;
            a.at(j, i) = v;
        }
    return a;
}

}  // namespace testutil
