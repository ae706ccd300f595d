#include "medgeo/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "medgeo/errors.hpp"

namespace medgeo {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Density of F with (1, d2) degrees of freedom, for Newton steps.
double f_density(double x, double d2) {
  if (x <= 0.0) return 0.0;
  const double half = 0.5;
  const double logc = std::lgamma(half * (d2 + 1.0)) - std::lgamma(half) -
                      std::lgamma(half * d2) - half * std::log(d2);
  const double logf =
      logc - half * std::log(x) - half * (d2 + 1.0) * std::log1p(x / d2);
  return std::exp(logf);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a); the front factor is symmetric.
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, std::int64_t d2) {
  if (d2 < 1) throw DomainError("f_cdf: d2 must be >= 1");
  if (x <= 0.0) return 0.0;
  const double dd = static_cast<double>(d2);
  // P(F <= x) = I_{x/(x+d2)}(1/2, d2/2)
  const double t = x / (x + dd);
  return incomplete_beta(0.5, 0.5 * dd, t);
}

double f_pvalue(double stat, std::int64_t d2) {
  if (d2 < 1) throw DomainError("f_pvalue: d2 must be >= 1");
  if (stat < 0.0) throw DomainError("f_pvalue: negative statistic");
  if (stat == 0.0) return 1.0;
  const double dd = static_cast<double>(d2);
  // Complemented form keeps precision in the far tail:
  // P(F >= x) = I_{d2/(d2+x)}(d2/2, 1/2).
  const double t = dd / (dd + stat);
  return incomplete_beta(0.5 * dd, 0.5, t);
}

double f_upper_critical(std::int64_t d2, double alpha) {
  if (d2 < 1) throw DomainError("f_upper_critical: d2 must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("f_upper_critical: alpha outside (0,1)");

  // Bracket the root of f_pvalue(x) = alpha. The normal-square limit gives a
  // good starting scale for every d2.
  const double z = std_normal_quantile(1.0 - alpha / 2.0);
  double hi = z * z + 1.0;
  while (f_pvalue(hi, d2) > alpha) hi *= 2.0;
  double lo = 0.0;

  // Coarse bisection, then Newton polish; fall back to bisection whenever a
  // Newton step leaves the bracket.
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f_pvalue(mid, d2) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double dd = static_cast<double>(d2);
  for (int i = 0; i < 60; ++i) {
    const double fx = f_pvalue(x, d2) - alpha;
    const double dfx = -f_density(x, dd);
    if (dfx == 0.0) break;
    double step = fx / dfx;
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (f_pvalue(next, d2) > alpha) {
      lo = next;
    } else {
      hi = next;
    }
    if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Rational initial guess for the normal quantile (Acklam's coefficients),
// refined below with Halley steps on erfc.
double normal_quantile_guess(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw DomainError("std_normal_quantile: prob outside (0,1)");
  // Work in the lower half where the erfc form of the CDF keeps full
  // relative precision out to the far tail.
  if (prob > 0.5) return -std_normal_quantile(1.0 - prob);
  double x = normal_quantile_guess(prob);
  // Halley refinement on Phi(x) - prob.
  for (int i = 0; i < 4; ++i) {
    const double err = std_normal_cdf(x) - prob;
    const double pdf =
        std::exp(-0.5 * x * x) * 0.3989422804014326779;
    if (pdf == 0.0) break;
    const double u = err / pdf;
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) * 0.7071067811865475244);
}

}  // namespace medgeo
