#include <doctest.h>

#include <cmath>

#include "medgeo/distributions.hpp"
#include "medgeo/errors.hpp"
#include "medgeo/rng.hpp"
#include "support/oracles.hpp"

using namespace medgeo;

TEST_CASE("f_upper_critical matches the independent finite-sum oracle") {
  for (const std::int64_t d2 : {7, 10, 17, 30, 47, 60, 97, 200, 997, 10000}) {
    for (const double alpha : {0.01, 0.05, 0.1, 0.5}) {
      const double lambda = f_upper_critical(d2, alpha);
      const double ref = oracle::f_upper_critical(d2, alpha);
      CAPTURE(d2);
      CAPTURE(alpha);
      CHECK(std::fabs(lambda - ref) <= 1e-10 * std::max(1.0, ref));
    }
  }
}

TEST_CASE("f_upper_critical hits published table values") {
  // F table, (1, 60) df at the 5% level.
  CHECK(std::fabs(f_upper_critical(60, 0.05) - 4.0012) < 5e-5);
  // Chi-square limit: z_{0.025}^2.
  CHECK(std::fabs(f_upper_critical(1000000, 0.05) - 3.8415) < 5e-5);
}

TEST_CASE("f_upper_critical rejects bad levels") {
  CHECK_THROWS_AS(f_upper_critical(1, 1.5), DomainError);
  CHECK_THROWS_AS(f_upper_critical(1, 0.0), DomainError);
  CHECK_THROWS_AS(f_upper_critical(0, 0.05), DomainError);
}

TEST_CASE("f_pvalue basics") {
  CHECK(f_pvalue(0.0, 60) == 1.0);
  CHECK(std::fabs(f_pvalue(4.0012, 60) - 0.05) <= 1e-6);
  CHECK(std::fabs(f_pvalue(3.8415, 1000000) - 0.05) <= 1e-5);
  CHECK_THROWS_AS(f_pvalue(-1.0, 10), DomainError);
}

TEST_CASE("f_pvalue is monotone nonincreasing in the statistic") {
  for (const std::int64_t d2 : {7, 47, 997}) {
    double prev = 1.0;
    for (double stat = 0.0; stat <= 30.0; stat += 0.25) {
      const double p = f_pvalue(stat, d2);
      CHECK(p <= prev + 1e-15);
      prev = p;
    }
  }
}

TEST_CASE("quantile and tail probability invert each other") {
  for (const std::int64_t d2 : {7, 17, 47, 97}) {
    for (const double alpha : {0.01, 0.05, 0.1, 0.5}) {
      const double lambda = f_upper_critical(d2, alpha);
      CHECK(std::fabs(f_pvalue(lambda, d2) - alpha) <= 1e-8);
    }
  }
}

TEST_CASE("critical value decreases in alpha and approaches the normal square") {
  for (const std::int64_t d2 : {7, 47, 997}) {
    double prev = 1e300;
    for (const double alpha : {0.01, 0.05, 0.1, 0.25, 0.5, 0.9}) {
      const double lambda = f_upper_critical(d2, alpha);
      CHECK(lambda < prev);
      prev = lambda;
    }
  }
  for (const double alpha : {0.01, 0.05, 0.1, 0.5}) {
    const double z = std_normal_quantile(1.0 - alpha / 2.0);
    const double lim = f_upper_critical(1000000, alpha);
    CHECK(std::fabs(lim - z * z) < 1e-3);
  }
}

TEST_CASE("standard normal quantile") {
  CHECK(std::fabs(std_normal_quantile(0.975) - 1.959964) < 1e-6);
  CHECK(std::fabs(std_normal_quantile(0.5)) < 1e-15);
  CHECK(std::fabs(std_normal_quantile(0.975) + std_normal_quantile(0.025)) <
        1e-13);
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);

  // Bisection-on-erf oracle where that formulation keeps full precision.
  for (const double p : {1e-4, 0.2, 0.5, 0.8, 0.9999}) {
    const double x = std_normal_quantile(p);
    CHECK(std::fabs(x - oracle::std_normal_quantile(p)) < 1e-12);
    CHECK(std::fabs(std_normal_cdf(x) - p) <= 1e-13);
  }
  // Far tails against high-precision reference values (40-digit erfinv,
  // evaluated at the exact double arguments).
  CHECK(std::fabs(std_normal_quantile(1e-9) - -5.997807015007686861) < 1e-12);
  CHECK(std::fabs(std_normal_quantile(1 - 1e-9) - 5.997807019601637426) <
        1e-12);
  CHECK(std::fabs(std_normal_quantile(1e-4) - -3.719016485455680564) < 1e-12);
  CHECK(std::fabs(std_normal_quantile(0.2) - -0.8416212335729142052) < 1e-13);
}

TEST_CASE("samplers are deterministic in (seed, stream, index)") {
  RngStream a(123, 5);
  RngStream b(123, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(123, 6);
  RngStream d(124, 5);
  bool all_same_c = true, all_same_d = true;
  RngStream a2(123, 5);
  for (int i = 0; i < 64; ++i) {
    const auto v = a2.next_u64();
    all_same_c = all_same_c && v == c.next_u64();
    all_same_d = all_same_d && v == d.next_u64();
  }
  CHECK_FALSE(all_same_c);
  CHECK_FALSE(all_same_d);
}

TEST_CASE("uniform_int covers the whole range") {
  RngStream rng(7, 1);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 100000; ++i) {
    const auto v = rng.uniform_int(10, 100);
    CHECK(v >= 10);
    CHECK(v <= 100);
    saw_lo = saw_lo || v == 10;
    saw_hi = saw_hi || v == 100;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
  CHECK_THROWS_AS(rng.uniform_int(5, 4), DomainError);
  CHECK_THROWS_AS(rng.uniform_real(5.0, 4.0), DomainError);
}

TEST_CASE("standard normal sample mean is near zero") {
  RngStream rng(2024, 2);
  double sum = 0.0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) sum += rng.std_normal();
  CHECK(std::fabs(sum / kDraws) < 0.005);
}

TEST_CASE("inverse gamma (1,1) matches its CDF at 1") {
  // P(X <= 1) = exp(-1) for this distribution.
  RngStream rng(2024, 3);
  constexpr int kDraws = 1000000;
  int below = 0;
  for (int i = 0; i < kDraws; ++i)
    if (rng.inv_gamma_1_1() <= 1.0) ++below;
  const double freq = static_cast<double>(below) / kDraws;
  CHECK(std::fabs(freq - std::exp(-1.0)) < 0.002);
}
