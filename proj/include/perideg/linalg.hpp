#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace perideg {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

/// Dense real symmetric matrix, row-major.  Construction symmetrizes the
/// entries and rejects input whose asymmetry exceeds 1e-12*(1+max|a_ij|).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
    SymMatrix(int n, std::vector<double> entries);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const Vec& d);
    static SymMatrix scalar(int n, double c);

    int dim() const { return n_; }
    double& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& entries() const { return a_; }

    double frobenius() const;
    double max_abs() const;
    Vec apply(const Vec& x) const;

    SymMatrix& operator+=(const SymMatrix& other);
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator*(double s, SymMatrix a);

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Dense general matrix, row-major.  Used for Newton Jacobians and
/// orthogonal eigenbases; no aliasing tricks, sizes stay desk-scale.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Mat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    double& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    Vec apply(const Vec& x) const;
    Mat transpose() const;
    double frobenius() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<double> a_;
};

Mat matmul(const Mat& a, const Mat& b);

/// Solves A x = b in place by LU with partial pivoting.
/// Throws std::runtime_error on numerical singularity.
Vec lu_solve(Mat a, Vec b);

}  // namespace perideg
