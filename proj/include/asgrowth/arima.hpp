#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asgrowth/series.hpp"

namespace asgrowth::arima {

/// Model order for ARIMA(p,d,q), optionally with a drift term.  The drift
/// enters as the mean of the d-th differences; the implied constant is
/// mu * (1 - sum(phi)).
struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    bool include_drift = false;

    /// Throws DegenerateInput when the spec cannot be fit to a series of
    /// the given length (needs p+d+q < length-2 and at least one of: an
    /// ARMA term, differencing, or a drift).
    void validate(std::size_t series_length) const;

    std::string label() const;  // e.g. "ARIMA(1,1,2)" or "ARIMA(0,1,0)+drift"
};

/// Parses "p,d,q" or "p,d,q,drift".  Throws DomainError on bad input.
ArimaSpec parse_spec(const std::string& text);

enum class FitMethod {
    css_ml,    // conditional sum of squares, then exact likelihood
    css_only,  // conditional sum of squares only
};

struct FitOptions {
    FitMethod method = FitMethod::css_ml;
    int max_iterations = 500;  // per optimizer stage
    double tolerance = 1e-8;   // relative objective-change tolerance
    double gradient_tol = 1e-5;  // polish target for max |gradient|
};

struct Parameters {
    std::vector<double> ar;
    std::vector<double> ma;
    std::optional<double> drift;
};

struct ArimaFit {
    ArimaSpec spec;
    Parameters params;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aicc = 0.0;
    std::vector<std::string> coeff_names;  // ar1.., ma1.., drift
    std::vector<double> coefficients;      // same order as coeff_names
    std::vector<double> coeff_se;          // from the inverse numerical
                                           // Hessian of the neg-log-likelihood
    Series train;      // the series the model was fit to
    Series fitted;     // on the differenced scale; fitted + residuals
    Series residuals;  // reconstruct the d-th differences exactly
    int iterations = 0;
    double max_gradient = 0.0;  // max |d nll / d coeff| at the optimum
};

/// Fits by CSS from zero starting values, then refines by maximizing the
/// exact Gaussian likelihood through a state-space innovations recursion
/// with sigma^2 profiled out.  Throws NonConvergence when the iteration
/// budget runs out, NonInvertible if the MA polynomial leaves the
/// invertibility region, DegenerateInput for unusable series.
ArimaFit fit(const Series& s, const ArimaSpec& spec,
             const FitOptions& opts = {});

/// Builds an ArimaFit from fixed parameters without any optimization:
/// residuals, likelihood and information criteria are evaluated at exactly
/// the given coefficients.  sigma2 is estimated unless supplied.
ArimaFit evaluate(const Series& s, const ArimaSpec& spec,
                  const Parameters& params,
                  std::optional<double> sigma2 = std::nullopt);

/// Exact Gaussian negative log-likelihood at the given parameters with
/// sigma^2 profiled out (state-space innovations form).
double exact_neg_loglik(const Series& s, const ArimaSpec& spec,
                        const Parameters& params);

/// Psi weights of the composite polynomial phi(B)(1-B)^d: psi[0] = 1,
/// psi[j] = theta_j + sum_i phistar_i psi[j-i].  Returns horizon+1 values.
std::vector<double> psi_weights(const ArimaSpec& spec,
                                const std::vector<double>& ar,
                                const std::vector<double>& ma, int horizon);
std::vector<double> psi_weights(const ArimaFit& fit, int horizon);

struct ForecastResult {
    int horizon = 0;
    double level = 0.95;
    std::vector<double> points;
    std::vector<double> se;     // sqrt(sigma2 * cumsum(psi^2))
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Iterates the fitted recursion forward with future innovations at zero
/// and re-integrates the differencing and drift.  level 0.95 uses the
/// conventional 1.96 multiplier; other levels use the exact normal
/// quantile.
ForecastResult forecast(const ArimaFit& fit, int horizon,
                        double level = 0.95);

struct SignificanceRow {
    std::string name;
    double coefficient = 0.0;
    double se = 0.0;
    double z = 0.0;  // coefficient / se; infinite when se == 0
    bool significant = false;  // |z| > 1.96
};

std::vector<SignificanceRow> coefficient_significance(const ArimaFit& fit);

/// Root mean squared error between observed and predicted holdout values.
/// Throws LengthMismatch on unequal lengths, DegenerateInput when empty.
double holdout_rmse(const std::vector<double>& observed,
                    const std::vector<double>& predicted);

}  // namespace asgrowth::arima
