// linalg.hpp — just enough dense linear algebra for the bordered Newton
// systems: a square matrix and LU factorization with partial pivoting.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace driftbif {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::fabs(v));
        return m;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            long double s = 0.0L;
            for (std::size_t j = 0; j < cols_; ++j) s += a_[i * cols_ + j] * x[j];
            y[i] = double(s);
        }
        return y;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// PA = LU with row pivoting.  Never throws on singularity: `ok` is false
// when a pivot falls below pivot_tol * max|A|, and min_pivot/scale let the
// caller report conditioning.
struct LuFactorization {
    Matrix lu;
    std::vector<std::size_t> perm;
    bool ok = false;
    double min_pivot = 0.0;
    double scale = 0.0;  // max |A_ij| of the input

    std::vector<double> solve(const std::vector<double>& b) const {
        const std::size_t n = lu.rows();
        if (b.size() != n) throw std::invalid_argument("LuFactorization::solve: size mismatch");
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
        for (std::size_t i = 1; i < n; ++i) {
            long double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= static_cast<long double>(lu(i, j)) * x[j];
            x[i] = double(s);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            long double s = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j)
                s -= static_cast<long double>(lu(ii, j)) * x[j];
            x[ii] = double(s / lu(ii, ii));
        }
        return x;
    }
};

inline LuFactorization lu_factor(Matrix a, double pivot_tol = 1e-13) {
    if (a.rows() != a.cols()) throw std::invalid_argument("lu_factor: matrix must be square");
    const std::size_t n = a.rows();
    LuFactorization f;
    f.scale = a.max_abs();
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    f.min_pivot = (n == 0) ? 0.0 : std::numeric_limits<double>::max();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(f.perm[k], f.perm[p]);
        }
        const double pivot = std::fabs(a(k, k));
        f.min_pivot = std::min(f.min_pivot, pivot);
        if (pivot <= pivot_tol * f.scale) {
            f.lu = std::move(a);
            f.ok = false;
            return f;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double l = a(i, k);
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    f.lu = std::move(a);
    f.ok = true;
    return f;
}

}  // namespace driftbif
