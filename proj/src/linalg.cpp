#include "perideg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace perideg {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

SymMatrix::SymMatrix(int n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("SymMatrix: entry count does not match dimension");
    double mx = 0.0;
    for (double x : a_) {
        if (!std::isfinite(x)) throw std::invalid_argument("SymMatrix: non-finite entry");
        mx = std::max(mx, std::abs(x));
    }
    const double tol = 1e-12 * (1.0 + mx);
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            const double d = at(i, j) - at(j, i);
            if (std::abs(d) > tol)
                throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(d) +
                                            " at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            const double m = 0.5 * (at(i, j) + at(j, i));
            at(i, j) = m;
            at(j, i) = m;
        }
    }
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(const Vec& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

SymMatrix SymMatrix::scalar(int n, double c) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
}

double SymMatrix::frobenius() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
}

Vec SymMatrix::apply(const Vec& x) const {
    Vec y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
    if (other.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

SymMatrix operator*(double s, SymMatrix a) {
    for (double& x : a.a_) x *= s;
    return a;
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Vec Mat::apply(const Vec& x) const {
    Vec y(r_, 0.0);
    for (int i = 0; i < r_; ++i) {
        double s = 0.0;
        for (int j = 0; j < c_; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat Mat::transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    return t;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    }
    return c;
}

Vec lu_solve(Mat a, Vec b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("lu_solve: dimension mismatch");
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;

    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a.at(r, col));
            if (v > best) { best = v; p = r; }
        }
        if (best == 0.0 || !std::isfinite(best))
            throw std::runtime_error("lu_solve: singular matrix at column " + std::to_string(col));
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(col, j));
            std::swap(b[p], b[col]);
        }
        const double d = a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) / d;
            if (f == 0.0) continue;
            a.at(r, col) = f;
            for (int j = col + 1; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
        x[i] = s / a.at(i, i);
    }
    return x;
}

}  // namespace perideg
