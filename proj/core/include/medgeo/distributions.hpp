#pragma once

#include <cstdint>

namespace medgeo {

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with (1, d2) degrees of freedom.
double f_cdf(double x, std::int64_t d2);

/// Upper-tail probability P(F_{1,d2} >= stat).
double f_pvalue(double stat, std::int64_t d2);

/// Upper-tail critical value: the lambda with P(F_{1,d2} > lambda) = alpha,
/// i.e. the (1 - alpha) quantile. Relative accuracy ~1e-12.
double f_upper_critical(std::int64_t d2, double alpha);

/// Standard normal CDF.
double std_normal_cdf(double x);

/// Standard normal quantile (inverse CDF), absolute accuracy ~1e-14.
double std_normal_quantile(double prob);

/// Two-sided tail probability 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z);

}  // namespace medgeo
