#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace leachate {

/// Dense row-major matrix of doubles. Sized for the small design matrices
/// this toolkit produces (hundreds of rows, tens of columns).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b for symmetric positive semi-definite A by Gaussian
/// elimination with partial pivoting. Throws on a numerically singular pivot.
inline std::vector<double> solve_linear_system(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(pivot, k))) pivot = i;
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        if (std::fabs(a(k, k)) < 1e-12) throw std::runtime_error("solve: singular matrix");
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Least-squares weights for design (with implicit column of ones appended
/// when add_intercept) against each target column, via the normal equations.
/// Falls back to ridge (lambda = 1e-8 scaled by the Gram diagonal) when the
/// plain system is singular. Returned matrix is (cols [+1]) x n_targets,
/// intercept last.
inline Matrix fit_least_squares(const Matrix& design, const Matrix& targets, bool add_intercept = true,
                                double ridge_fallback = 1e-8) {
    const std::size_t n = design.rows();
    const std::size_t p = design.cols() + (add_intercept ? 1 : 0);
    if (targets.rows() != n) throw std::invalid_argument("fit_least_squares: row mismatch");
    if (n < p) throw std::invalid_argument("fit_least_squares: need at least " + std::to_string(p) +
                                           " rows, got " + std::to_string(n));

    auto feature = [&](std::size_t r, std::size_t c) -> double {
        return c < design.cols() ? design(r, c) : 1.0;
    };

    Matrix gram(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += feature(r, i) * feature(r, j);
            gram(i, j) = gram(j, i) = s;
        }
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < p; ++i) diag_scale = std::max(diag_scale, gram(i, i));
    if (diag_scale == 0.0) diag_scale = 1.0;

    Matrix weights(p, targets.cols());
    for (std::size_t t = 0; t < targets.cols(); ++t) {
        std::vector<double> rhs(p, 0.0);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t r = 0; r < n; ++r) rhs[i] += feature(r, i) * targets(r, t);
        std::vector<double> w;
        try {
            w = solve_linear_system(gram, rhs);
        } catch (const std::runtime_error&) {
            Matrix ridged = gram;
            for (std::size_t i = 0; i < p; ++i) ridged(i, i) += ridge_fallback * diag_scale;
            w = solve_linear_system(ridged, rhs);
        }
        for (std::size_t i = 0; i < p; ++i) weights(i, t) = w[i];
    }
    return weights;
}

}  // namespace leachate
