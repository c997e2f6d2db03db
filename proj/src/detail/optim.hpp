#pragma once

// Derivative-free and finite-difference optimizers for the model-fitting
// stages: Nelder-Mead simplex for the global moves, then a BFGS polish with
// central-difference gradients to push the gradient norm down near the
// optimum.  Objectives may return +inf to reject a point.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace asgrowth::detail {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimResult {
    std::vector<double> x;
    double fx = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

inline OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                               double step, double ftol, int max_iter) {
    const std::size_t n = x0.size();
    OptimResult out;
    if (n == 0) {
        out.x = x0;
        out.fx = f(x0);
        out.converged = true;
        return out;
    }

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    std::vector<std::size_t> order(n + 1);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo = order[0], hi = order[n], nh = order[n - 1];

        const double spread = std::fabs(fv[hi] - fv[lo]);
        if (std::isfinite(fv[lo]) &&
            spread <= ftol * (std::fabs(fv[lo]) + ftol)) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= double(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (pts[hi][j] - centroid[j]);
            return p;
        };

        auto refl = blend(-1.0);
        double frefl = f(refl);
        if (frefl < fv[lo]) {
            auto expd = blend(-2.0);
            double fexp = f(expd);
            if (fexp < frefl) {
                pts[hi] = std::move(expd);
                fv[hi] = fexp;
            } else {
                pts[hi] = std::move(refl);
                fv[hi] = frefl;
            }
            continue;
        }
        if (frefl < fv[nh]) {
            pts[hi] = std::move(refl);
            fv[hi] = frefl;
            continue;
        }
        auto contr = blend(frefl < fv[hi] ? -0.5 : 0.5);
        double fcon = f(contr);
        if (fcon < std::min(frefl, fv[hi])) {
            pts[hi] = std::move(contr);
            fv[hi] = fcon;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == lo) continue;
            for (std::size_t j = 0; j < n; ++j)
                pts[i][j] = pts[lo][j] + 0.5 * (pts[i][j] - pts[lo][j]);
            fv[i] = f(pts[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    out.x = pts[best];
    out.fx = fv[best];
    out.iterations = iter;
    return out;
}

/// Central-difference gradient; h scaled per coordinate.
inline std::vector<double> central_gradient(const Objective& f,
                                            const std::vector<double>& x,
                                            double h = 1e-6) {
    std::vector<double> g(x.size(), 0.0);
    std::vector<double> p = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = h * std::max(1.0, std::fabs(x[i]));
        p[i] = x[i] + hi;
        const double fp = f(p);
        p[i] = x[i] - hi;
        const double fm = f(p);
        p[i] = x[i];
        g[i] = (fp - fm) / (2.0 * hi);
    }
    return g;
}

/// BFGS with numerical gradients and Armijo backtracking.  Strictly
/// monotone: only improving, finite steps are accepted, so the result is
/// never worse than x0.  Stops when max|grad| <= gtol.
inline OptimResult bfgs_polish(const Objective& f, std::vector<double> x0,
                               double gtol, int max_iter, double h = 1e-6) {
    const std::size_t n = x0.size();
    OptimResult out;
    out.x = x0;
    out.fx = f(x0);
    if (n == 0 || !std::isfinite(out.fx)) {
        out.converged = n == 0;
        return out;
    }

    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) H[i][i] = 1.0;
    std::vector<double> g = central_gradient(f, out.x, h);

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::fabs(v));
        if (gmax <= gtol) {
            out.converged = true;
            break;
        }

        std::vector<double> dir(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) dir[i] -= H[i][j] * g[j];

        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
        if (!(slope < 0.0)) {
            // reset to steepest descent if the approximation degenerates
            for (std::size_t i = 0; i < n; ++i) {
                std::fill(H[i].begin(), H[i].end(), 0.0);
                H[i][i] = 1.0;
                dir[i] = -g[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
            if (!(slope < 0.0)) break;
        }

        double t = 1.0;
        std::vector<double> xn(n);
        double fn = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = out.x[i] + t * dir[i];
            fn = f(xn);
            if (std::isfinite(fn) && fn <= out.fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> gn = central_gradient(f, xn, h);
        std::vector<double> s(n), yv(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - out.x[i];
            yv[i] = gn[i] - g[i];
        }
        double sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) sy += s[i] * yv[i];
        if (sy > 1e-12) {
            // BFGS inverse update: H <- (I - s y'/sy) H (I - y s'/sy) + s s'/sy
            std::vector<double> Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * yv[j];
            double yHy = 0.0;
            for (std::size_t i = 0; i < n; ++i) yHy += yv[i] * Hy[i];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i][j] += ((sy + yHy) * s[i] * s[j]) / (sy * sy) -
                               (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
                }
            }
        }
        out.x = xn;
        out.fx = fn;
        g = std::move(gn);
    }
    out.iterations = iter;
    return out;
}

}  // namespace asgrowth::detail
