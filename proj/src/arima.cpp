#include "asgrowth/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asgrowth/distributions.hpp"
#include "asgrowth/errors.hpp"
#include "asgrowth/series_stats.hpp"
#include "detail/linalg.hpp"
#include "detail/optim.hpp"

namespace asgrowth::arima {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- partial-autocorrelation reparameterization ------------------------
//
// Unconstrained u maps through tanh to partial autocorrelations in (-1,1),
// then through the Durbin-Levinson expansion to coefficients of a
// stationary polynomial.  The same map enforces invertibility for the MA
// side under the plus-sign MA convention.

std::vector<double> pac_expand(const std::vector<double>& u) {
    const std::size_t k = u.size();
    std::vector<double> now(k), work(k);
    for (std::size_t j = 0; j < k; ++j) now[j] = work[j] = std::tanh(u[j]);
    for (std::size_t j = 1; j < k; ++j) {
        const double a = now[j];
        for (std::size_t i = 0; i < j; ++i) work[i] -= a * now[j - 1 - i];
        for (std::size_t i = 0; i < j; ++i) now[i] = work[i];
    }
    return now;
}

// Runs the Durbin-Levinson recursion backwards; returns the partial
// autocorrelations, or nullopt when the recursion blows up (coefficients
// far outside the stationary region).
std::optional<std::vector<double>> pac_reduce(std::vector<double> c) {
    const std::size_t k = c.size();
    std::vector<double> pac(k), work(c);
    for (std::size_t j = k; j-- > 1;) {
        const double a = c[j];
        pac[j] = a;
        const double den = 1.0 - a * a;
        if (!(std::fabs(den) > 1e-12)) return std::nullopt;
        for (std::size_t i = 0; i < j; ++i)
            work[i] = (c[i] + a * c[j - 1 - i]) / den;
        for (std::size_t i = 0; i < j; ++i) c[i] = work[i];
        if (!std::isfinite(c[0])) return std::nullopt;
    }
    if (k > 0) pac[0] = c[0];
    return pac;
}

// slack > 0 admits boundary MA roots; slack == 0 demands strict
// stationarity.
bool within_unit_pacs(const std::vector<double>& coeffs, double slack) {
    if (coeffs.empty()) return true;
    auto pac = pac_reduce(coeffs);
    if (!pac) return false;
    for (double v : *pac)
        if (!(std::fabs(v) < 1.0 + slack)) return false;
    return true;
}

struct ParamView {
    std::vector<double> ar;
    std::vector<double> ma;
};

ParamView split_params(const std::vector<double>& x, int p, int q) {
    ParamView v;
    v.ar.assign(x.begin(), x.begin() + p);
    v.ma.assign(x.begin() + p, x.begin() + p + q);
    return v;
}

std::vector<double> transform(const std::vector<double>& u, int p, int q) {
    std::vector<double> uar(u.begin(), u.begin() + p);
    std::vector<double> uma(u.begin() + p, u.begin() + p + q);
    std::vector<double> out = pac_expand(uar);
    std::vector<double> ma = pac_expand(uma);
    out.insert(out.end(), ma.begin(), ma.end());
    return out;
}

// ---- conditional (CSS) recursion ----------------------------------------

std::vector<double> css_residuals(const std::vector<double>& z,
                                  const std::vector<double>& ar,
                                  const std::vector<double>& ma) {
    const std::size_t m = z.size();
    const std::size_t p = ar.size(), q = ma.size();
    std::vector<double> e(m, 0.0);
    for (std::size_t t = 0; t < m; ++t) {
        double v = z[t];
        for (std::size_t i = 1; i <= p && i <= t; ++i)
            v -= ar[i - 1] * z[t - i];
        for (std::size_t j = 1; j <= q && j <= t; ++j)
            v -= ma[j - 1] * e[t - j];
        e[t] = v;
    }
    return e;
}

double css_sse(const std::vector<double>& z, const std::vector<double>& ar,
               const std::vector<double>& ma) {
    const std::vector<double> e = css_residuals(z, ar, ma);
    double s = 0.0;
    for (std::size_t t = ar.size(); t < e.size(); ++t) s += e[t] * e[t];
    return s;
}

// ---- exact likelihood via the innovations (Kalman) recursion ------------

struct KalmanOutput {
    double nll = kInf;     // profiled negative log-likelihood
    double sigma2 = 0.0;   // ssq / m
    double sumlog_f = 0.0;
};

// Stationary state covariance: solves P = T P T' + R R' elementwise.
std::optional<std::vector<double>> lyapunov_init(
    const std::vector<double>& T, const std::vector<double>& R,
    std::size_t r) {
    const std::size_t n2 = r * r;
    detail::Matrix A(n2, n2);
    std::vector<double> b(n2);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const std::size_t row = i * r + j;
            b[row] = R[i] * R[j];
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t l = 0; l < r; ++l)
                    A.at(row, k * r + l) =
                        (i == k && j == l ? 1.0 : 0.0) - T[i * r + k] * T[j * r + l];
        }
    }
    return detail::solve(std::move(A), std::move(b));
}

KalmanOutput kalman_nll(const std::vector<double>& z,
                        const std::vector<double>& ar,
                        const std::vector<double>& ma) {
    KalmanOutput out;
    const std::size_t p = ar.size(), q = ma.size();
    const std::size_t m = z.size();
    const std::size_t r = std::max(p, q + 1);

    std::vector<double> T(r * r, 0.0);
    for (std::size_t i = 0; i < p; ++i) T[i * r] = ar[i];
    for (std::size_t i = 0; i + 1 < r; ++i) T[i * r + i + 1] = 1.0;
    std::vector<double> R(r, 0.0);
    R[0] = 1.0;
    for (std::size_t j = 0; j < q; ++j) R[j + 1] = ma[j];

    auto P0 = lyapunov_init(T, R, r);
    if (!P0) return out;
    std::vector<double> P = *P0;
    std::vector<double> a(r, 0.0);

    double ssq = 0.0, sumlog = 0.0;
    std::vector<double> Ta(r), TP(r * r), TPZ(r);
    for (std::size_t t = 0; t < m; ++t) {
        const double F = P[0];
        if (!(F > 1e-300) || !std::isfinite(F)) return out;
        const double v = z[t] - a[0];
        ssq += v * v / F;
        sumlog += std::log(F);

        for (std::size_t i = 0; i < r; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < r; ++j) s += T[i * r + j] * a[j];
            Ta[i] = s;
        }
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < r; ++k)
                    s += T[i * r + k] * P[k * r + j];
                TP[i * r + j] = s;
            }
            TPZ[i] = TP[i * r];
        }
        for (std::size_t i = 0; i < r; ++i) a[i] = Ta[i] + TPZ[i] * v / F;
        // P <- T P T' + R R' - (TPZ)(TPZ)'/F, symmetrized
        std::vector<double> Pn(r * r, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i; j < r; ++j) {
                double s = R[i] * R[j] - TPZ[i] * TPZ[j] / F;
                for (std::size_t k = 0; k < r; ++k)
                    s += TP[i * r + k] * T[j * r + k];
                Pn[i * r + j] = s;
                Pn[j * r + i] = s;
            }
        }
        P.swap(Pn);
    }
    if (!std::isfinite(ssq) || !(ssq > 0.0)) return out;

    out.sigma2 = ssq / double(m);
    out.sumlog_f = sumlog;
    out.nll = 0.5 * double(m) *
                  (std::log(2.0 * M_PI) + 1.0 + std::log(out.sigma2)) +
              0.5 * sumlog;
    return out;
}

// Numerical Hessian of f by central differences.
detail::Matrix numeric_hessian(const detail::Objective& f,
                               const std::vector<double>& x,
                               double h0 = 1e-4) {
    const std::size_t n = x.size();
    detail::Matrix H(n, n);
    const double f0 = f(x);
    std::vector<double> p = x;
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i)
        h[i] = h0 * std::max(1.0, std::fabs(x[i]));
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = x[i] + h[i];
        const double fp = f(p);
        p[i] = x[i] - h[i];
        const double fm = f(p);
        p[i] = x[i];
        H.at(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            p[i] = x[i] + h[i];
            p[j] = x[j] + h[j];
            const double fpp = f(p);
            p[j] = x[j] - h[j];
            const double fpm = f(p);
            p[i] = x[i] - h[i];
            const double fmm = f(p);
            p[j] = x[j] + h[j];
            const double fmp = f(p);
            p[i] = x[i];
            p[j] = x[j];
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            H.at(i, j) = v;
            H.at(j, i) = v;
        }
    }
    return H;
}

std::vector<double> hessian_se(const detail::Objective& f,
                               const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> se(n, std::numeric_limits<double>::quiet_NaN());
    if (n == 0) return se;
    const detail::Matrix H = numeric_hessian(f, x);
    auto cov = detail::invert(H);
    if (!cov) return se;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = cov->at(i, i);
        if (v > 0.0 && std::isfinite(v)) se[i] = std::sqrt(v);
    }
    return se;
}

struct Prepared {
    std::vector<double> w;   // d-th differences of the series
    std::vector<double> z;   // w minus the drift (if any)
    double mu = 0.0;
    std::size_t m = 0;
};

Prepared prepare(const Series& s, const ArimaSpec& spec,
                 std::optional<double> drift) {
    Prepared pr;
    const Series wd = spec.d > 0 ? stats::difference(s, spec.d) : s;
    pr.w = wd.values;
    pr.m = pr.w.size();
    if (spec.include_drift) pr.mu = drift ? *drift : stats::mean(pr.w);
    pr.z = pr.w;
    if (spec.include_drift)
        for (double& v : pr.z) v -= pr.mu;
    double ss = 0.0;
    const double zm = stats::mean(pr.z);
    for (double v : pr.z) ss += (v - zm) * (v - zm);
    if (ss == 0.0)
        throw DegenerateInput(
            "series is constant after differencing; nothing to fit");
    return pr;
}

double aicc_of(double loglik, const ArimaSpec& spec, std::size_t m) {
    const double k =
        double(spec.p + spec.q + (spec.include_drift ? 1 : 0) + 1);
    const double denom = double(m) - k - 1.0;
    if (denom <= 0.0) return kInf;
    return -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / denom;
}

void finalize_fit(ArimaFit& fit, const Series& s, const ArimaSpec& spec,
                  const Prepared& pr) {
    const std::vector<double> e =
        css_residuals(pr.z, fit.params.ar, fit.params.ma);
    std::optional<int> year;
    if (s.origin_year) year = *s.origin_year + spec.d;
    std::vector<double> fitted(pr.m);
    for (std::size_t t = 0; t < pr.m; ++t) fitted[t] = pr.w[t] - e[t];
    fit.residuals = Series(e, year);
    fit.fitted = Series(std::move(fitted), year);
    fit.train = s;

    fit.coeff_names.clear();
    fit.coefficients.clear();
    for (int i = 0; i < spec.p; ++i) {
        fit.coeff_names.push_back("ar" + std::to_string(i + 1));
        fit.coefficients.push_back(fit.params.ar[std::size_t(i)]);
    }
    for (int j = 0; j < spec.q; ++j) {
        fit.coeff_names.push_back("ma" + std::to_string(j + 1));
        fit.coefficients.push_back(fit.params.ma[std::size_t(j)]);
    }
    if (spec.include_drift) {
        fit.coeff_names.push_back("drift");
        fit.coefficients.push_back(*fit.params.drift);
    }
}

// Standard error of the drift estimate: sample sd of the d-th differences
// over sqrt(count), the random-walk-with-drift convention.
double drift_se(const std::vector<double>& w) {
    if (w.size() < 2) return 0.0;
    return stats::stddev(w, true) / std::sqrt(double(w.size()));
}

}  // namespace

void ArimaSpec::validate(std::size_t series_length) const {
    if (p < 0 || d < 0 || q < 0)
        throw DegenerateInput("model orders must be non-negative");
    if (p + q == 0 && d == 0 && !include_drift)
        throw DegenerateInput("empty model: need an ARMA term, differencing, "
                              "or a drift");
    if (std::size_t(p + d + q) + 2 >= series_length)
        throw DegenerateInput("series too short for ARIMA(" +
                              std::to_string(p) + "," + std::to_string(d) +
                              "," + std::to_string(q) + ")");
}

std::string ArimaSpec::label() const {
    std::ostringstream os;
    os << "ARIMA(" << p << "," << d << "," << q << ")";
    if (include_drift) os << "+drift";
    return os.str();
}

ArimaSpec parse_spec(const std::string& text) {
    std::vector<std::string> tok;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            tok.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    tok.push_back(cur);
    if (tok.size() != 3 && tok.size() != 4)
        throw DomainError("model spec must be p,d,q or p,d,q,drift: '" +
                          text + "'");
    ArimaSpec spec;
    int* fields[3] = {&spec.p, &spec.d, &spec.q};
    for (int i = 0; i < 3; ++i) {
        try {
            std::size_t pos = 0;
            *fields[i] = std::stoi(tok[std::size_t(i)], &pos);
            if (pos != tok[std::size_t(i)].size() || *fields[i] < 0)
                throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw DomainError("bad model order '" + tok[std::size_t(i)] +
                              "' in spec '" + text + "'");
        }
    }
    if (tok.size() == 4) {
        if (tok[3] != "drift")
            throw DomainError("unexpected token '" + tok[3] +
                              "' in spec '" + text + "'");
        spec.include_drift = true;
    }
    return spec;
}

double exact_neg_loglik(const Series& s, const ArimaSpec& spec,
                        const Parameters& params) {
    if (int(params.ar.size()) != spec.p || int(params.ma.size()) != spec.q)
        throw LengthMismatch("parameter count does not match the spec");
    const Prepared pr = prepare(s, spec, params.drift);
    return kalman_nll(pr.z, params.ar, params.ma).nll;
}

ArimaFit fit(const Series& s, const ArimaSpec& spec, const FitOptions& opts) {
    spec.validate(s.size());
    const Prepared pr = prepare(s, spec, std::nullopt);
    const int p = spec.p, q = spec.q;
    const std::size_t k = std::size_t(p + q);

    ArimaFit out;
    out.spec = spec;
    if (spec.include_drift) out.params.drift = pr.mu;

    int iterations = 0;
    std::vector<double> raw;  // (ar..., ma...)

    detail::Objective nll_raw = [&](const std::vector<double>& x) {
        const ParamView v = split_params(x, p, q);
        if (!within_unit_pacs(v.ar, 0.0)) return kInf;
        if (!within_unit_pacs(v.ma, 1e-7)) return kInf;
        return kalman_nll(pr.z, v.ar, v.ma).nll;
    };
    detail::Objective css_raw = [&](const std::vector<double>& x) {
        const ParamView v = split_params(x, p, q);
        const double sse = css_sse(pr.z, v.ar, v.ma);
        return std::isfinite(sse) ? sse : kInf;
    };

    if (k > 0) {
        // stage 1: conditional sum of squares from zero starting values,
        // in the unconstrained (partial autocorrelation) space
        detail::Objective css_u = [&](const std::vector<double>& u) {
            return css_raw(transform(u, p, q));
        };
        auto nm_css =
            detail::nelder_mead(css_u, std::vector<double>(k, 0.0), 0.2,
                                opts.tolerance, opts.max_iterations);
        iterations += nm_css.iterations;

        if (opts.method == FitMethod::css_only) {
            raw = transform(nm_css.x, p, q);
            if (!nm_css.converged)
                throw NonConvergence(iterations, nm_css.fx);
        } else {
            // stage 2: exact likelihood, warm-started from the CSS estimate.
            // A CSS optimum saturated against the stationarity boundary can
            // leave the exact likelihood infinite there; restart from zeros.
            detail::Objective nll_u = [&](const std::vector<double>& u) {
                return nll_raw(transform(u, p, q));
            };
            std::vector<double> start = nm_css.x;
            if (!std::isfinite(nll_u(start))) start.assign(k, 0.0);
            auto nm_ml = detail::nelder_mead(nll_u, start, 0.1,
                                             opts.tolerance,
                                             opts.max_iterations);
            iterations += nm_ml.iterations;
            auto polish =
                detail::bfgs_polish(nll_raw, transform(nm_ml.x, p, q),
                                    opts.gradient_tol, opts.max_iterations);
            iterations += polish.iterations;
            raw = polish.x;
            if (!nm_ml.converged && !polish.converged)
                throw NonConvergence(iterations, polish.fx);
        }
    }

    ParamView v = split_params(raw.empty() ? std::vector<double>(k, 0.0) : raw,
                               p, q);
    out.params.ar = v.ar;
    out.params.ma = v.ma;
    if (!within_unit_pacs(out.params.ma, 1e-7))
        throw NonInvertible("MA polynomial left the invertibility region");

    std::vector<double> grad_x = out.params.ar;
    grad_x.insert(grad_x.end(), out.params.ma.begin(), out.params.ma.end());

    std::vector<double> se;
    if (opts.method == FitMethod::css_only) {
        const std::size_t n_css = pr.m - std::size_t(p);
        const double sse = css_sse(pr.z, out.params.ar, out.params.ma);
        out.sigma2 = sse / double(n_css);
        out.loglik = -0.5 * double(n_css) *
                     (std::log(2.0 * M_PI) + 1.0 + std::log(out.sigma2));
        detail::Objective css_nll = [&](const std::vector<double>& x) {
            const ParamView pv = split_params(x, p, q);
            const double ss = css_sse(pr.z, pv.ar, pv.ma);
            if (!(ss > 0.0) || !std::isfinite(ss)) return kInf;
            return 0.5 * double(n_css) *
                   (std::log(2.0 * M_PI) + 1.0 + std::log(ss / double(n_css)));
        };
        se = hessian_se(css_nll, grad_x);
        if (k > 0) {
            const auto g = detail::central_gradient(css_nll, grad_x);
            for (double gi : g)
                out.max_gradient = std::max(out.max_gradient, std::fabs(gi));
        }
    } else {
        const KalmanOutput ko =
            kalman_nll(pr.z, out.params.ar, out.params.ma);
        if (!std::isfinite(ko.nll))
            throw NonConvergence(iterations, kInf);
        out.sigma2 = ko.sigma2;
        out.loglik = -ko.nll;
        se = hessian_se(nll_raw, grad_x);
        if (k > 0) {
            const auto g = detail::central_gradient(nll_raw, grad_x);
            for (double gi : g)
                out.max_gradient = std::max(out.max_gradient, std::fabs(gi));
        }
    }

    out.aicc = aicc_of(out.loglik, spec, pr.m);
    out.iterations = iterations;
    finalize_fit(out, s, spec, pr);
    out.coeff_se = se;
    if (spec.include_drift) out.coeff_se.push_back(drift_se(pr.w));
    return out;
}

ArimaFit evaluate(const Series& s, const ArimaSpec& spec,
                  const Parameters& params, std::optional<double> sigma2) {
    spec.validate(s.size());
    if (int(params.ar.size()) != spec.p || int(params.ma.size()) != spec.q)
        throw LengthMismatch("parameter count does not match the spec");
    const Prepared pr = prepare(s, spec, params.drift);

    ArimaFit out;
    out.spec = spec;
    out.params = params;
    if (spec.include_drift && !params.drift) out.params.drift = pr.mu;

    const KalmanOutput ko = kalman_nll(pr.z, params.ar, params.ma);
    if (!std::isfinite(ko.nll))
        throw DegenerateInput("likelihood not defined at these parameters");
    out.sigma2 = sigma2 ? *sigma2 : ko.sigma2;
    out.loglik = -ko.nll;
    out.aicc = aicc_of(out.loglik, spec, pr.m);
    finalize_fit(out, s, spec, pr);
    out.coeff_se.assign(out.coefficients.size(),
                        std::numeric_limits<double>::quiet_NaN());
    if (spec.include_drift) out.coeff_se.back() = drift_se(pr.w);
    return out;
}

std::vector<double> psi_weights(const ArimaSpec& spec,
                                const std::vector<double>& ar,
                                const std::vector<double>& ma, int horizon) {
    if (horizon < 0) throw DomainError("psi_weights horizon must be >= 0");
    if (int(ar.size()) != spec.p || int(ma.size()) != spec.q)
        throw LengthMismatch("parameter count does not match the spec");

    // composite polynomial phi(B)(1-B)^d as 1 - sum a_i B^i
    std::vector<double> c(std::size_t(spec.p) + 1, 0.0);
    c[0] = 1.0;
    for (int i = 0; i < spec.p; ++i) c[std::size_t(i) + 1] = -ar[std::size_t(i)];
    for (int rep = 0; rep < spec.d; ++rep) {
        std::vector<double> nc(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            nc[i] += c[i];
            nc[i + 1] -= c[i];
        }
        c = std::move(nc);
    }
    const std::size_t pd = c.size() - 1;
    std::vector<double> a(pd);
    for (std::size_t i = 1; i <= pd; ++i) a[i - 1] = -c[i];

    std::vector<double> psi(std::size_t(horizon) + 1, 0.0);
    psi[0] = 1.0;
    for (int j = 1; j <= horizon; ++j) {
        double v = j <= spec.q ? ma[std::size_t(j) - 1] : 0.0;
        const std::size_t lim = std::min(std::size_t(j), pd);
        for (std::size_t i = 1; i <= lim; ++i)
            v += a[i - 1] * psi[std::size_t(j) - i];
        psi[std::size_t(j)] = v;
    }
    return psi;
}

std::vector<double> psi_weights(const ArimaFit& fit, int horizon) {
    return psi_weights(fit.spec, fit.params.ar, fit.params.ma, horizon);
}

ForecastResult forecast(const ArimaFit& fit, int horizon, double level) {
    if (horizon < 1) throw DomainError("forecast horizon must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must be in (0,1)");

    const ArimaSpec& spec = fit.spec;
    const Series& y = fit.train;
    const Prepared pr = prepare(y, spec, fit.params.drift);
    const std::vector<double> e =
        css_residuals(pr.z, fit.params.ar, fit.params.ma);
    const std::size_t m = pr.m;

    // extend the ARMA recursion with future innovations at zero
    std::vector<double> zext = pr.z;
    zext.reserve(m + std::size_t(horizon));
    for (int h = 1; h <= horizon; ++h) {
        const std::size_t t = m + std::size_t(h) - 1;
        double v = 0.0;
        for (int i = 1; i <= spec.p; ++i)
            v += fit.params.ar[std::size_t(i) - 1] * zext[t - std::size_t(i)];
        for (int j = 1; j <= spec.q; ++j) {
            if (std::size_t(j) >= std::size_t(h)) {
                const std::size_t idx = t - std::size_t(j);
                v += fit.params.ma[std::size_t(j) - 1] * e[idx];
            }
        }
        zext.push_back(v);
    }

    ForecastResult r;
    r.horizon = horizon;
    r.level = level;
    r.points.resize(std::size_t(horizon));

    // re-integrate the differencing: levels[k] holds the most recent value
    // of the k-th difference of y
    std::vector<double> levels(std::size_t(spec.d));
    {
        Series cur = y;
        for (int kd = 0; kd < spec.d; ++kd) {
            levels[std::size_t(kd)] = cur.values.back();
            cur = stats::difference(cur, 1);
        }
    }
    for (int h = 1; h <= horizon; ++h) {
        double next = pr.mu + zext[m + std::size_t(h) - 1];
        for (int kd = spec.d - 1; kd >= 0; --kd) {
            levels[std::size_t(kd)] += next;
            next = levels[std::size_t(kd)];
        }
        r.points[std::size_t(h) - 1] = next;
    }

    const std::vector<double> psi =
        psi_weights(spec, fit.params.ar, fit.params.ma, horizon - 1);
    const double zq =
        level == 0.95 ? 1.96 : stats::normal_quantile(0.5 * (1.0 + level));
    r.se.resize(std::size_t(horizon));
    r.lower.resize(std::size_t(horizon));
    r.upper.resize(std::size_t(horizon));
    double cum = 0.0;
    for (int h = 1; h <= horizon; ++h) {
        cum += psi[std::size_t(h) - 1] * psi[std::size_t(h) - 1];
        const double se = std::sqrt(fit.sigma2 * cum);
        r.se[std::size_t(h) - 1] = se;
        r.lower[std::size_t(h) - 1] = r.points[std::size_t(h) - 1] - zq * se;
        r.upper[std::size_t(h) - 1] = r.points[std::size_t(h) - 1] + zq * se;
    }
    return r;
}

std::vector<SignificanceRow> coefficient_significance(const ArimaFit& fit) {
    std::vector<SignificanceRow> rows;
    rows.reserve(fit.coefficients.size());
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
        SignificanceRow row;
        row.name = fit.coeff_names[i];
        row.coefficient = fit.coefficients[i];
        row.se = fit.coeff_se.size() > i ? fit.coeff_se[i]
                                         : std::numeric_limits<double>::quiet_NaN();
        if (row.se == 0.0) {
            // a zero standard error is treated as the limiting case
            row.z = row.coefficient == 0.0
                        ? 0.0
                        : std::copysign(kInf, row.coefficient);
            row.significant = row.coefficient != 0.0;
        } else {
            row.z = row.coefficient / row.se;
            row.significant = std::fabs(row.z) > 1.96;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double holdout_rmse(const std::vector<double>& observed,
                    const std::vector<double>& predicted) {
    if (observed.size() != predicted.size())
        throw LengthMismatch("holdout_rmse inputs differ in length");
    if (observed.empty())
        throw DegenerateInput("holdout_rmse needs at least one value");
    double s = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = observed[i] - predicted[i];
        s += d * d;
    }
    return std::sqrt(s / double(observed.size()));
}

}  // namespace asgrowth::arima
