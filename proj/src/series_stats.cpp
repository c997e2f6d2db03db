#include "asgrowth/series_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "asgrowth/distributions.hpp"
#include "asgrowth/errors.hpp"
#include "detail/linalg.hpp"

namespace asgrowth::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw DegenerateInput("mean of empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double variance(const std::vector<double>& v, bool sample) {
    const std::size_t n = v.size();
    if (n < (sample ? 2u : 1u))
        throw DegenerateInput("variance needs at least "
                              + std::string(sample ? "2" : "1") + " values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / double(sample ? n - 1 : n);
}

double stddev(const std::vector<double>& v, bool sample) {
    return std::sqrt(variance(v, sample));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw LengthMismatch("pearson inputs differ in length");
    if (a.size() < 2) throw DegenerateInput("pearson needs length >= 2");
    const double ma = mean(a), mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw ZeroVariance("pearson input is constant");
    return sab / std::sqrt(saa * sbb);
}

Series difference(const Series& s, int d) {
    if (d < 0) throw DomainError("difference order must be non-negative");
    if (std::size_t(d) >= s.size())
        throw DomainError("difference order must be below series length");
    if (s.size() - std::size_t(d) < 2)
        throw DegenerateInput("differencing would leave fewer than 2 values");
    std::vector<double> v = s.values;
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = v.size() - 1; i > 0; --i) v[i] -= v[i - 1];
        v.erase(v.begin());
    }
    std::optional<int> year;
    if (s.origin_year) year = *s.origin_year + d;
    return Series(std::move(v), year);
}

Series iaav(const Series& s) {
    if (s.size() < 3) throw DegenerateInput("iaav needs length >= 3");
    Series diff = difference(s, 1);
    for (double& v : diff.values) v = std::fabs(v);
    return diff;
}

AcfResult acf(const Series& s, int max_lag) {
    const std::size_t n = s.size();
    if (n < 2) throw DegenerateInput("acf needs length >= 2");
    if (max_lag < 0 || std::size_t(max_lag) >= n)
        throw DomainError("max_lag must satisfy 0 <= max_lag < length");
    const double m = mean(s.values);
    double denom = 0.0;
    for (double x : s.values) denom += (x - m) * (x - m);
    if (denom == 0.0) throw ZeroVariance("acf input is constant");

    AcfResult r;
    r.max_lag = max_lag;
    r.values.resize(std::size_t(max_lag) + 1);
    r.values[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + std::size_t(k) < n; ++t)
            num += (s[t] - m) * (s[t + std::size_t(k)] - m);
        r.values[std::size_t(k)] = num / denom;
    }
    r.conf_bound = 1.96 / std::sqrt(double(n));
    return r;
}

AcfResult pacf(const Series& s, int max_lag) {
    AcfResult rho = acf(s, max_lag);
    AcfResult r;
    r.max_lag = max_lag;
    r.conf_bound = rho.conf_bound;
    r.values.assign(std::size_t(max_lag) + 1, 0.0);
    r.values[0] = 1.0;
    if (max_lag == 0) return r;

    // Durbin-Levinson: phi[k][k] is the lag-k partial autocorrelation.
    std::vector<double> phi_prev(std::size_t(max_lag) + 1, 0.0);
    std::vector<double> phi(std::size_t(max_lag) + 1, 0.0);
    phi_prev[1] = rho.values[1];
    r.values[1] = rho.values[1];
    for (int k = 2; k <= max_lag; ++k) {
        double num = rho.values[std::size_t(k)];
        double den = 1.0;
        for (int j = 1; j < k; ++j) {
            num -= phi_prev[std::size_t(j)] * rho.values[std::size_t(k - j)];
            den -= phi_prev[std::size_t(j)] * rho.values[std::size_t(j)];
        }
        if (std::fabs(den) < 1e-14)
            throw ZeroVariance("pacf recursion degenerate at lag "
                               + std::to_string(k));
        const double pk = num / den;
        for (int j = 1; j < k; ++j)
            phi[std::size_t(j)] = phi_prev[std::size_t(j)] -
                                  pk * phi_prev[std::size_t(k - j)];
        phi[std::size_t(k)] = pk;
        r.values[std::size_t(k)] = pk;
        std::swap(phi, phi_prev);
    }
    return r;
}

namespace {

// MacKinnon (1991) response-surface 1%/5%/10% critical values for the
// Dickey-Fuller t statistic: cv = b0 + b1/T + b2/T^2.
struct CritSurface {
    double b0, b1, b2;
};
constexpr CritSurface kCrit[3][3] = {
    // none
    {{-2.5658, -1.960, -10.04}, {-1.9393, -0.398, 0.0}, {-1.6156, -0.181, 0.0}},
    // constant
    {{-3.4336, -5.999, -29.25}, {-2.8621, -2.738, -8.36}, {-2.5671, -1.438, -4.48}},
    // constant + trend
    {{-3.9638, -8.353, -47.44}, {-3.4126, -4.039, -17.83}, {-3.1279, -2.418, -7.58}},
};

double critical_value(TrendMode mode, int which, double T) {
    const CritSurface& c = kCrit[int(mode)][which];
    return c.b0 + c.b1 / T + c.b2 / (T * T);
}

}  // namespace

StatTestResult dickey_fuller(const Series& s, TrendMode mode, int lag_order) {
    const std::size_t n = s.size();
    if (n < 8) throw DegenerateInput("dickey_fuller needs length >= 8");
    if (lag_order < 0) throw DomainError("lag_order must be non-negative");

    // Regress dy_t on y_{t-1} [, 1] [, t] [, dy_{t-1} .. dy_{t-L}].
    const std::size_t L = std::size_t(lag_order);
    std::vector<double> dy(n - 1);
    for (std::size_t t = 1; t < n; ++t) dy[t - 1] = s[t] - s[t - 1];
    if (dy.size() <= L + 2)
        throw DegenerateInput("dickey_fuller: too few observations for lag order");

    const std::size_t rows = dy.size() - L;
    std::size_t k = 1 + L;
    if (mode == TrendMode::constant) k += 1;
    if (mode == TrendMode::constant_trend) k += 2;
    if (rows <= k)
        throw DegenerateInput("dickey_fuller: too few observations for design");

    detail::Matrix X(rows, k);
    std::vector<double> y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t t = i + L;          // index into dy
        y[i] = dy[t];
        std::size_t col = 0;
        X.at(i, col++) = s[t];                // y_{t-1} relative to dy[t]
        for (std::size_t j = 1; j <= L; ++j) X.at(i, col++) = dy[t - j];
        if (mode != TrendMode::none) X.at(i, col++) = 1.0;
        if (mode == TrendMode::constant_trend) X.at(i, col++) = double(t + 1);
    }

    auto fit = detail::ols(X, y);
    if (!fit) throw SingularRegression("dickey_fuller design is rank deficient");
    if (!(fit->se[0] > 0.0))
        throw SingularRegression("dickey_fuller: zero standard error on level");

    StatTestResult r;
    r.statistic = fit->beta[0] / fit->se[0];
    r.p_value_kind = PValueKind::tabulated_bracket;
    const double T = double(rows);
    const double cv1 = critical_value(mode, 0, T);
    const double cv5 = critical_value(mode, 1, T);
    const double cv10 = critical_value(mode, 2, T);
    if (r.statistic < cv1)
        r.p_value = 0.005;
    else if (r.statistic < cv5)
        r.p_value = 0.025;
    else if (r.statistic < cv10)
        r.p_value = 0.075;
    else
        r.p_value = 0.5;
    r.reject_null = r.statistic < cv5;
    return r;
}

StatTestResult jarque_bera(const Series& s) {
    const std::size_t n = s.size();
    if (n < 8) throw DegenerateInput("jarque_bera needs length >= 8");
    const double m = mean(s.values);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : s.values) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    if (m2 == 0.0) throw ZeroVariance("jarque_bera input is constant");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    StatTestResult r;
    r.statistic = double(n) / 6.0 *
                  (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    r.p_value = std::exp(-r.statistic / 2.0);  // chi^2(2) survival
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
    r.p_value_kind = PValueKind::exact;
    r.reject_null = r.p_value < 0.05;
    return r;
}

namespace {

double poly(const double* c, int n, double x) {
    double v = c[0];
    double p = 1.0;
    for (int i = 1; i < n; ++i) {
        p *= x;
        v += c[i] * p;
    }
    return v;
}

}  // namespace

// Royston (1995), Applied Statistics algorithm AS R94.
StatTestResult shapiro_wilk(const Series& s) {
    const std::size_t n = s.size();
    if (n < 3 || n > 5000)
        throw DegenerateInput("shapiro_wilk needs 3 <= length <= 5000");

    std::vector<double> x = s.values;
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) throw ZeroVariance("shapiro_wilk input is constant");

    static const double c1[6] = {0.0, 0.221157, -0.147981,
                                 -2.071190, 4.434685, -2.706056};
    static const double c2[6] = {0.0, 0.042981, -0.293762,
                                 -1.752461, 5.682633, -3.582633};
    static const double c3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
    static const double g[2] = {-2.273, 0.459};

    const std::size_t n2 = n / 2;
    std::vector<double> a(n2);

    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an25 = double(n) + 0.25;
        double summ2 = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            a[i] = normal_quantile((double(i) + 1.0 - 0.375) / an25);
            summ2 += a[i] * a[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(double(n));
        const double a1 = poly(c1, 6, rsn) - a[0] / ssumm2;

        std::size_t i1;
        double fac;
        double a2 = 0.0;
        if (n > 5) {
            i1 = 3;
            a2 = -a[1] / ssumm2 + poly(c2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        } else {
            i1 = 2;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) /
                            (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        if (n > 5) a[1] = a2;
        for (std::size_t i = i1 - 1; i < n2; ++i) a[i] = -a[i] / fac;
    }

    // W as the squared correlation between the data and the antisymmetric
    // coefficient vector (-a[0], ..., -a[n2-1], [0,] a[n2-1], ..., a[0]).
    std::vector<double> coef(n, 0.0);
    for (std::size_t i = 0; i < n2; ++i) {
        coef[i] = -a[i];
        coef[n - 1 - i] = a[i];
    }
    const double xbar = mean(x);
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (x[i] - xbar) / range;
        ssa += coef[i] * coef[i];
        ssx += dx * dx;
        sax += coef[i] * dx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    StatTestResult r;
    r.statistic = w;
    r.p_value_kind = PValueKind::exact;
    if (n == 3) {
        const double pi6 = 1.90985931710274;
        const double stqr = 1.04719755119660;
        double pw = pi6 * (std::asin(std::sqrt(w)) - stqr);
        r.p_value = std::clamp(pw, 0.0, 1.0);
        r.reject_null = r.p_value < 0.05;
        return r;
    }

    double y = std::log(w1);
    const double logn = std::log(double(n));
    double mu, sigma;
    if (n <= 11) {
        const double gamma = poly(g, 2, double(n));
        if (y >= gamma) {
            r.p_value = 1e-99;
            r.reject_null = true;
            return r;
        }
        y = -std::log(gamma - y);
        mu = poly(c3, 4, double(n));
        sigma = std::exp(poly(c4, 4, double(n)));
    } else {
        mu = poly(c5, 4, logn);
        sigma = std::exp(poly(c6, 3, logn));
    }
    r.p_value = std::clamp(1.0 - normal_cdf((y - mu) / sigma), 0.0, 1.0);
    r.reject_null = r.p_value < 0.05;
    return r;
}

}  // namespace asgrowth::stats
