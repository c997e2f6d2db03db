#pragma once

// Small dense linear algebra used internally: Gaussian elimination with
// partial pivoting on systems no larger than a few dozen unknowns, and an
// ordinary least squares helper built on top of it.  Deliberately minimal;
// nothing here is performance critical.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace asgrowth::detail {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

/// Solves A x = b for square A.  Returns nullopt when A is singular to
/// working precision.  A and b are taken by value and consumed.
inline std::optional<std::vector<double>> solve(Matrix A,
                                                std::vector<double> b) {
    const std::size_t n = A.rows();
    if (n != A.cols() || b.size() != n) return std::nullopt;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(A.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(A.at(r, col)) > best) {
                best = std::fabs(A.at(r, col));
                pivot = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) return std::nullopt;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(A.at(col, j), A.at(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        const double d = A.at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A.at(r, col) / d;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j)
                A.at(r, j) -= f * A.at(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A.at(i, j) * x[j];
        x[i] = s / A.at(i, i);
        if (!std::isfinite(x[i])) return std::nullopt;
    }
    return x;
}

/// Inverse of a square matrix via column-by-column solves; nullopt when
/// singular.
inline std::optional<Matrix> invert(const Matrix& A) {
    const std::size_t n = A.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        auto col = solve(A, std::move(e));
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = (*col)[i];
    }
    return inv;
}

struct OlsResult {
    std::vector<double> beta;
    std::vector<double> se;      // conventional OLS standard errors
    double sigma2 = 0.0;         // RSS / (m - k)
    double rss = 0.0;
    std::vector<double> fitted;
    std::vector<double> residuals;
};

/// Ordinary least squares through the normal equations.  Returns nullopt
/// when X'X is singular (rank-deficient design).
inline std::optional<OlsResult> ols(const Matrix& X,
                                    const std::vector<double>& y) {
    const std::size_t m = X.rows();
    const std::size_t k = X.cols();
    if (y.size() != m || m < k || k == 0) return std::nullopt;

    Matrix xtx(k, k);
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < m; ++r) s += X.at(r, i) * X.at(r, j);
            xtx.at(i, j) = s;
            xtx.at(j, i) = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += X.at(r, i) * y[r];
        xty[i] = s;
    }

    // scale-aware singularity guard on the Gram matrix diagonal
    double diag_max = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        diag_max = std::max(diag_max, std::fabs(xtx.at(i, i)));
    auto beta = solve(xtx, xty);
    if (!beta) return std::nullopt;
    auto xtx_inv = invert(xtx);
    if (!xtx_inv) return std::nullopt;
    for (std::size_t i = 0; i < k; ++i) {
        if (xtx_inv->at(i, i) > 1e12 / (diag_max > 0 ? diag_max : 1.0))
            return std::nullopt;
    }

    OlsResult r;
    r.beta = *beta;
    r.fitted.resize(m);
    r.residuals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double f = 0.0;
        for (std::size_t j = 0; j < k; ++j) f += X.at(i, j) * r.beta[j];
        r.fitted[i] = f;
        r.residuals[i] = y[i] - f;
        r.rss += r.residuals[i] * r.residuals[i];
    }
    r.sigma2 = m > k ? r.rss / double(m - k) : 0.0;
    r.se.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        r.se[j] = std::sqrt(std::max(0.0, r.sigma2 * xtx_inv->at(j, j)));
    return r;
}

}  // namespace asgrowth::detail
