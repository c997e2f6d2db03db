#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

// Slow reference computations, implemented along different routes than the
// library so agreement is meaningful.
namespace testsupport {

// Psi weights as an impulse response: drive the ARMA difference equation
// with e_0 = 1 and zeros after, then integrate d times.  The library builds
// the same weights from the composite polynomial recursion instead.
inline std::vector<double> psi_impulse(const std::vector<double>& ar,
                                       const std::vector<double>& ma, int d,
                                       int horizon) {
    const std::size_t n = std::size_t(horizon) + 1;
    std::vector<double> e(n, 0.0), z(n, 0.0);
    e[0] = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        double v = e[t];
        for (std::size_t i = 0; i < ar.size(); ++i)
            if (t > i) v += ar[i] * z[t - i - 1];
        for (std::size_t j = 0; j < ma.size(); ++j)
            if (t > j) v += ma[j] * e[t - j - 1];
        z[t] = v;
    }
    for (int k = 0; k < d; ++k)
        for (std::size_t i = 1; i < n; ++i) z[i] += z[i - 1];
    return z;
}

// Partial autocorrelation at lag k by solving the Yule-Walker system with
// Gaussian elimination (the library uses the Durbin-Levinson recursion).
// acf holds autocorrelations with acf[0] == 1.
inline double yule_walker_pacf(const std::vector<double>& acf,
                               std::size_t k) {
    if (k == 0 || k >= acf.size())
        throw std::invalid_argument("lag out of range");
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            a[i][j] = acf[std::size_t(std::labs(long(i) - long(j)))];
        a[i][k] = acf[i + 1];
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (std::fabs(a[col][col]) < 1e-14)
            throw std::runtime_error("singular Yule-Walker system");
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return a[k - 1][k] / a[k - 1][k - 1];
}

// Best segmentation by brute force: tries every placement of exactly
// 0..max_cps changepoints honoring the minimum segment length, scoring with
// the supplied cost function, and returns the penalized optimum.  cost(a, b)
// must price the inclusive segment [a, b].
struct EnumeratedSegmentation {
    std::vector<std::size_t> changepoints;
    double penalized_cost = std::numeric_limits<double>::infinity();
};

template <typename CostFn>
EnumeratedSegmentation enumerate_best_segmentation(
    std::size_t n, std::size_t max_cps, double penalty_per_cp,
    std::size_t min_seg, CostFn cost) {
    EnumeratedSegmentation best;
    std::vector<std::size_t> cps;

    // Scores the current complete segmentation.
    const auto score = [&]() {
        double total = double(cps.size()) * penalty_per_cp;
        std::size_t from = 0;
        for (std::size_t cp : cps) {
            total += cost(from, cp - 1);
            from = cp;
        }
        total += cost(from, n - 1);
        if (total < best.penalized_cost) {
            best.penalized_cost = total;
            best.changepoints = cps;
        }
    };

    // Recursively extends with a next changepoint > last, keeping every
    // segment at least min_seg long.
    const auto extend = [&](auto&& self, std::size_t lo) -> void {
        score();
        if (cps.size() == max_cps) return;
        for (std::size_t t = lo; t + min_seg <= n; ++t) {
            cps.push_back(t);
            self(self, t + min_seg);
            cps.pop_back();
        }
    };
    if (n >= 1) extend(extend, min_seg);
    return best;
}

}  // namespace testsupport
