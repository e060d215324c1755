#include "perideg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace perideg {

std::vector<double> SpectralData::expanded() const {
    std::vector<double> out;
    out.reserve(n);
    for (size_t c = 0; c < eigenvalues.size(); ++c)
        for (int m = 0; m < multiplicities[c]; ++m) out.push_back(eigenvalues[c]);
    return out;
}

int SpectralData::count_strictly_above(double threshold) const {
    int count = 0;
    for (size_t c = 0; c < eigenvalues.size(); ++c)
        if (eigenvalues[c] > threshold) count += multiplicities[c];
    return count;
}

double SpectralData::nearest_gap(double value, double* matched) const {
    double best = std::numeric_limits<double>::infinity();
    for (double ev : eigenvalues) {
        const double d = std::abs(ev - value);
        if (d < best) {
            best = d;
            if (matched) *matched = ev;
        }
    }
    return best;
}

namespace {

double offdiag_frobenius(const SymMatrix& a) {
    double s = 0.0;
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * a.at(i, j) * a.at(i, j);
    return std::sqrt(s);
}

}  // namespace

SpectralData eigen_sym(const SymMatrix& input, double cluster_tol) {
    const int n = input.dim();
    if (n <= 0) throw std::invalid_argument("eigen_sym: empty matrix");
    const double norm = input.frobenius();
    const double stop = 1e-13 * (1.0 + norm);
    if (cluster_tol < 0.0) cluster_tol = Tolerances{}.cluster_tol(input);

    SymMatrix a = input;
    Mat q = Mat::identity(n);

    const int max_sweeps = 100;
    int sweep = 0;
    while (offdiag_frobenius(a) > stop) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("eigen_sym: Jacobi iteration did not converge");
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a.at(p, r);
                if (std::abs(apr) <= 1e-300) continue;
                const double theta = (a.at(r, r) - a.at(p, p)) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a.at(p, p), arr = a.at(r, r);
                a.at(p, p) = app - t * apr;
                a.at(r, r) = arr + t * apr;
                a.at(p, r) = 0.0;
                a.at(r, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i != p && i != r) {
                        const double aip = a.at(i, p), air = a.at(i, r);
                        a.at(i, p) = aip - s * (air + tau * aip);
                        a.at(p, i) = a.at(i, p);
                        a.at(i, r) = air + s * (aip - tau * air);
                        a.at(r, i) = a.at(i, r);
                    }
                    const double qip = q.at(i, p), qir = q.at(i, r);
                    q.at(i, p) = qip - s * (qir + tau * qip);
                    q.at(i, r) = qir + s * (qip - tau * qir);
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i) < a.at(j, j) || (a.at(i, i) == a.at(j, j) && i < j); });

    SpectralData sd;
    sd.n = n;
    sd.cluster_tol = cluster_tol;
    sd.basis = Mat(n, n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) sd.basis.at(row, col) = q.at(row, order[col]);

    // Merge eigenvalues whose gap is within cluster_tol; the representative
    // is the cluster mean.
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && a.at(order[end], order[end]) - a.at(order[end - 1], order[end - 1]) <= cluster_tol)
            ++end;
        double mean = 0.0;
        for (int i = start; i < end; ++i) mean += a.at(order[i], order[i]);
        mean /= (end - start);
        sd.eigenvalues.push_back(mean);
        sd.multiplicities.push_back(end - start);
        start = end;
    }
    return sd;
}

double mode_threshold(double period, int k) {
    if (period <= 0.0) throw std::invalid_argument("mode_threshold: period must be positive");
    const double w = 2.0 * k * M_PI / period;
    return w * w;
}

int mode_cutoff(double period, double lambda_max) {
    if (period <= 0.0) throw std::invalid_argument("mode_cutoff: period must be positive");
    if (lambda_max <= 0.0) return 0;
    return static_cast<int>(std::ceil(period * std::sqrt(lambda_max) / (2.0 * M_PI)));
}

ResonanceError::ResonanceError(int mode_, double eigenvalue_, double threshold_)
    : std::runtime_error("resonant mode k=" + std::to_string(mode_) + ": eigenvalue " +
                         std::to_string(eigenvalue_) + " sits at the threshold " +
                         std::to_string(threshold_)),
      mode(mode_),
      eigenvalue(eigenvalue_),
      threshold(threshold_) {}

std::set<int> ResonanceReport::positive_modes() const {
    std::set<int> out;
    for (int k : resonant_ks)
        if (k >= 1) out.insert(k);
    return out;
}

ResonanceReport resonance_report(const SpectralData& sd, double period, double tol_res) {
    ResonanceReport rep;
    rep.tol_res = tol_res;
    rep.k_cutoff = mode_cutoff(period, sd.max_eigenvalue());
    for (int k = 0; k <= rep.k_cutoff; ++k) {
        double matched = 0.0;
        if (sd.nearest_gap(mode_threshold(period, k), &matched) <= tol_res) {
            rep.resonant_ks.insert(k);
            rep.matched_eigenvalues[k] = matched;
        }
    }
    return rep;
}

ResonanceReport resonance_report(const SymMatrix& a, double period, const Tolerances& tols) {
    return resonance_report(eigen_sym(a, tols.cluster_tol(a)), period, tols.resonance_tol(a));
}

int eigenvalues_above_mode(const SpectralData& sd, double period, int k, double tol_res) {
    if (k < 0) throw std::invalid_argument("eigenvalues_above_mode: k must be >= 0");
    const double threshold = mode_threshold(period, k);
    double matched = 0.0;
    if (sd.nearest_gap(threshold, &matched) <= tol_res) throw ResonanceError(k, matched, threshold);
    return sd.count_strictly_above(threshold);
}

int eigenvalues_above_mode(const SymMatrix& a, double period, int k, const Tolerances& tols) {
    return eigenvalues_above_mode(eigen_sym(a, tols.cluster_tol(a)), period, k, tols.resonance_tol(a));
}

SymMatrix mode_block(const SymMatrix& a, double period, int k) {
    if (period <= 0.0) throw std::invalid_argument("mode_block: period must be positive");
    if (k < 0) throw std::invalid_argument("mode_block: k must be >= 0");
    const int n = a.dim();
    const double w = 4.0 * k * k * M_PI * M_PI;
    const double t2 = period * period;
    SymMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = (i == j ? w / (w + t2) : 0.0) - (t2 / (w + t2)) * a.at(i, j);
    return out;
}

MorseIndex morse_index(const SpectralData& sd) {
    MorseIndex mi;
    for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
        if (sd.eigenvalues[c] < -sd.cluster_tol) mi.index += sd.multiplicities[c];
        if (std::abs(sd.eigenvalues[c]) <= sd.cluster_tol) mi.degenerate = true;
    }
    return mi;
}

MorseIndex morse_index(const SymMatrix& a, const Tolerances& tols) {
    return morse_index(eigen_sym(a, tols.cluster_tol(a)));
}

}  // namespace perideg
