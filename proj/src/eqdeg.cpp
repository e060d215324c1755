#include "perideg/eqdeg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace perideg {

namespace {

long long parity_sign(long long count) { return (count % 2 != 0) ? -1 : 1; }

}  // namespace

void RepresentationDescriptor::add(int multiplicity, int mode) {
    if (multiplicity < 1) throw std::invalid_argument("representation: multiplicity must be >= 1");
    if (mode < 0) throw std::invalid_argument("representation: mode must be >= 0");
    for (auto& [j, k] : summands) {
        if (k == mode) {
            j += multiplicity;
            return;
        }
    }
    summands.emplace_back(multiplicity, mode);
    std::sort(summands.begin(), summands.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
}

void RepresentationDescriptor::validate() const {
    int prev = -1;
    for (const auto& [j, k] : summands) {
        if (j < 1 || k < 0 || k <= prev)
            throw std::invalid_argument("representation: modes must be strictly increasing with j >= 1");
        prev = k;
    }
}

int RepresentationDescriptor::trivial_multiplicity() const {
    for (const auto& [j, k] : summands)
        if (k == 0) return j;
    return 0;
}

int RepresentationDescriptor::max_mode() const {
    int m = 0;
    for (const auto& [j, k] : summands) m = std::max(m, k);
    return m;
}

RingElement degree_of_minus_id(const RepresentationDescriptor& rep, int truncation_bound) {
    rep.validate();
    const long long sign = parity_sign(rep.trivial_multiplicity());
    RingElement e(std::max(truncation_bound, std::max(rep.max_mode(), 1)));
    e.set_so2(sign);
    for (const auto& [j, k] : rep.summands)
        if (k >= 1) e.set_zk(k, sign * j);
    return e;
}

namespace {

void require_clean(const ResonanceReport& rep, double period) {
    if (rep.clean()) return;
    const int k = *rep.resonant_ks.begin();
    throw ResonanceError(k, rep.matched_eigenvalues.at(k), mode_threshold(period, k));
}

}  // namespace

RingElement linear_degree(const SymMatrix& a, double period, const Tolerances& tols) {
    const SpectralData sd = eigen_sym(a, tols.cluster_tol(a));
    const double tol_res = tols.resonance_tol(a);
    require_clean(resonance_report(sd, period, tol_res), period);

    const int cutoff = mode_cutoff(period, sd.max_eigenvalue());
    const long long sign = parity_sign(eigenvalues_above_mode(sd, period, 0, tol_res));

    RingElement e(std::max(cutoff, 1));
    e.set_so2(sign);
    for (int k = 1; k <= cutoff; ++k)
        e.set_zk(k, sign * eigenvalues_above_mode(sd, period, k, tol_res));
    return e;
}

RingElement linear_degree_via_product(const SymMatrix& a, double period, const Tolerances& tols) {
    const SpectralData sd = eigen_sym(a, tols.cluster_tol(a));
    const double tol_res = tols.resonance_tol(a);
    require_clean(resonance_report(sd, period, tol_res), period);

    const int cutoff = mode_cutoff(period, sd.max_eigenvalue());
    const double t2 = period * period;

    // Eigenvalues of the compact loop operator above 1 come from pairs
    // (alpha, k) with alpha above the k-th threshold; pairs sharing the same
    // operator eigenvalue form one representation.
    struct Contribution {
        double op_eigenvalue;
        int mode;
        int multiplicity;
    };
    std::vector<Contribution> contributions;
    for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
        const double alpha = sd.eigenvalues[c];
        for (int k = 0; k <= cutoff; ++k) {
            if (alpha <= mode_threshold(period, k)) continue;
            const double w = 4.0 * k * k * M_PI * M_PI;
            contributions.push_back({t2 * (1.0 + alpha) / (w + t2), k, sd.multiplicities[c]});
        }
    }
    std::sort(contributions.begin(), contributions.end(),
              [](const Contribution& x, const Contribution& y) { return x.op_eigenvalue > y.op_eigenvalue; });

    std::vector<RingElement> factors;
    size_t i = 0;
    const int trunc = std::max(cutoff, 1);
    while (i < contributions.size()) {
        RepresentationDescriptor rep;
        const double lam = contributions[i].op_eigenvalue;
        size_t j = i;
        while (j < contributions.size() &&
               std::abs(contributions[j].op_eigenvalue - lam) <= 1e-12 * (1.0 + std::abs(lam))) {
            rep.add(contributions[j].multiplicity, contributions[j].mode);
            ++j;
        }
        factors.push_back(degree_of_minus_id(rep, trunc));
        i = j;
    }
    if (factors.empty()) return RingElement::one(trunc);
    return product_many(factors);
}

long long brouwer_index_nondegenerate(const SymMatrix& h, const Tolerances& tols) {
    const SpectralData sd = eigen_sym(h, tols.cluster_tol(h));
    long long positive = 0;
    for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
        if (std::abs(sd.eigenvalues[c]) <= sd.cluster_tol)
            throw std::domain_error("brouwer_index_nondegenerate: singular Hessian");
        if (sd.eigenvalues[c] > 0) positive += sd.multiplicities[c];
    }
    return parity_sign(positive);
}

namespace {

struct IcoSphere {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;
};

IcoSphere make_icosphere(int subdivisions) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    IcoSphere s;
    auto push = [&](double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        s.vertices.push_back({x / n, y / n, z / n});
    };
    push(-1, phi, 0); push(1, phi, 0); push(-1, -phi, 0); push(1, -phi, 0);
    push(0, -1, phi); push(0, 1, phi); push(0, -1, -phi); push(0, 1, -phi);
    push(phi, 0, -1); push(phi, 0, 1); push(-phi, 0, -1); push(-phi, 0, 1);
    s.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const auto& va = s.vertices[a];
            const auto& vb = s.vertices[b];
            push(va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]);
            const int idx = static_cast<int>(s.vertices.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(s.faces.size() * 4);
        for (const auto& f : s.faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        s.faces = std::move(next);
    }
    return s;
}

/// Signed solid angle subtended by the triangle (a, b, c) seen from the
/// origin (van Oosterom-Strackee).
double solid_angle(const std::array<double, 3>& a, const std::array<double, 3>& b,
                   const std::array<double, 3>& c) {
    const double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                       a[2] * (b[0] * c[1] - b[1] * c[0]);
    const double la = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    const double lb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    const double lc = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    const double dab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double dbc = b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
    const double dca = c[0] * a[0] + c[1] * a[1] + c[2] * a[2];
    return 2.0 * std::atan2(det, la * lb * lc + dab * lc + dbc * la + dca * lb);
}

}  // namespace

long long brouwer_index_oracle(const VectorField& field, const Vec& center, double radius) {
    const int n = static_cast<int>(center.size());
    if (radius <= 0.0) throw std::invalid_argument("brouwer_index_oracle: radius must be positive");

    auto check_nonzero = [&](const Vec& v) {
        const double m = norm2(v);
        if (!(m > 1e-14))
            throw std::runtime_error("brouwer_index_oracle: field vanishes on the sphere");
        return m;
    };

    if (n == 1) {
        Vec right = field({center[0] + radius});
        Vec left = field({center[0] - radius});
        check_nonzero(right);
        check_nonzero(left);
        const int sr = right[0] > 0 ? 1 : -1;
        const int sl = left[0] > 0 ? 1 : -1;
        return (sr - sl) / 2;
    }

    if (n == 2) {
        const int samples = 20000;
        double total = 0.0;
        double prev = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double t = 2.0 * M_PI * i / samples;
            const Vec v = field({center[0] + radius * std::cos(t), center[1] + radius * std::sin(t)});
            check_nonzero(v);
            const double ang = std::atan2(v[1], v[0]);
            if (i > 0) {
                double d = ang - prev;
                while (d > M_PI) d -= 2.0 * M_PI;
                while (d < -M_PI) d += 2.0 * M_PI;
                total += d;
            }
            prev = ang;
        }
        const double winding = total / (2.0 * M_PI);
        const long long deg = std::llround(winding);
        if (std::abs(winding - deg) > 0.01)
            throw std::runtime_error("brouwer_index_oracle: winding sum did not settle on an integer");
        return deg;
    }

    if (n == 3) {
        static const IcoSphere sphere = make_icosphere(6);  // 40962 vertices
        std::vector<std::array<double, 3>> images(sphere.vertices.size());
        for (size_t i = 0; i < sphere.vertices.size(); ++i) {
            const auto& v = sphere.vertices[i];
            Vec x = {center[0] + radius * v[0], center[1] + radius * v[1], center[2] + radius * v[2]};
            Vec f = field(x);
            check_nonzero(f);
            images[i] = {f[0], f[1], f[2]};
        }
        double total = 0.0;
        for (const auto& f : sphere.faces)
            total += solid_angle(images[f[0]], images[f[1]], images[f[2]]);
        const double deg_real = total / (4.0 * M_PI);
        const long long deg = std::llround(deg_real);
        if (std::abs(deg_real - deg) > 0.01)
            throw std::runtime_error("brouwer_index_oracle: solid-angle sum did not settle on an integer");
        return deg;
    }

    throw std::invalid_argument("brouwer_index_oracle: boundary sampling implemented for n <= 3 only");
}

long long index_at_infinity_sign(const SymMatrix& v_inf, int n, const Tolerances& tols) {
    const MorseIndex mi = morse_index(v_inf, tols);
    return parity_sign(n - mi.index);
}

std::set<int> gcd_closure(const std::set<int>& modes) {
    std::set<int> closure = modes;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<int> snapshot(closure.begin(), closure.end());
        for (size_t i = 0; i < snapshot.size(); ++i)
            for (size_t j = i + 1; j < snapshot.size(); ++j)
                if (closure.insert(std::gcd(snapshot[i], snapshot[j])).second) grew = true;
    }
    return closure;
}

EquivariantIndex index_of_point(const std::string& owner, const SymMatrix& hessian,
                                long long brouwer, double period, const Tolerances& tols) {
    const SpectralData sd = eigen_sym(hessian, tols.cluster_tol(hessian));
    const double tol_res = tols.resonance_tol(hessian);
    const ResonanceReport rep = resonance_report(sd, period, tol_res);

    EquivariantIndex idx;
    idx.owner = owner;
    idx.brouwer = brouwer;
    idx.resonant_modes = rep.positive_modes();
    idx.singular_hessian = rep.singular();
    idx.exclusion = gcd_closure(idx.resonant_modes);
    idx.k_cutoff = rep.k_cutoff;

    for (int k = 0; k <= idx.k_cutoff; ++k) {
        if (rep.resonant_ks.count(k)) continue;
        idx.jk[k] = eigenvalues_above_mode(sd, period, k, tol_res);
    }

    RingElement value(std::max(idx.k_cutoff, 1));
    value.set_so2(brouwer);
    for (int k = 1; k <= idx.k_cutoff; ++k) {
        if (idx.exclusion.count(k))
            value.mark_undefined(k);
        else
            value.set_zk(k, brouwer * idx.jk.at(k));
    }
    idx.value = value;
    return idx;
}

}  // namespace perideg
