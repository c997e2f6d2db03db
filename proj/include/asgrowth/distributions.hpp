#pragma once

namespace asgrowth::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), Wichura's AS 241 double-precision
/// rational approximation.  Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

}  // namespace asgrowth::stats
