// Test-only reference implementations. Each one takes a deliberately
// different route from the library code it checks, so agreement is evidence
// rather than tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// ---------------------------------------------------------------------------
// Student-t CDF for integer degrees of freedom via the classic finite
// trigonometric sums (exact identities, no incomplete beta anywhere).
inline double t_cdf_int_df(double x, std::int64_t nu) {
  if (nu < 1) throw std::invalid_argument("t_cdf_int_df: nu < 1");
  const double pi = 3.14159265358979323846;
  const double theta = std::atan(x / std::sqrt(static_cast<double>(nu)));
  if (nu == 1) return 0.5 + theta / pi;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  if (nu % 2 == 1) {
    double term = c;
    double sum = term;
    for (std::int64_t k = 2; k <= nu - 3; k += 2) {
      term *= c * c * static_cast<double>(k) / static_cast<double>(k + 1);
      sum += term;
    }
    return 0.5 + (theta + s * sum) / pi;
  }
  double term = 1.0;
  double sum = 1.0;
  for (std::int64_t k = 1; k <= nu - 3; k += 2) {
    term *= c * c * static_cast<double>(k) / static_cast<double>(k + 1);
    sum += term;
  }
  return 0.5 + 0.5 * s * sum;
}

// F(1, d2) is the square of a t(d2) variable.
inline double f_cdf(double x, std::int64_t d2) {
  if (x <= 0.0) return 0.0;
  return 2.0 * t_cdf_int_df(std::sqrt(x), d2) - 1.0;
}

inline double f_upper_tail(double x, std::int64_t d2) {
  return 1.0 - f_cdf(x, d2);
}

// Pure bisection for the upper-tail critical value.
inline double f_upper_critical(std::int64_t d2, double alpha) {
  double lo = 0.0;
  double hi = 1.0;
  while (f_upper_tail(hi, d2) > alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f_upper_tail(mid, d2) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Bisection on erf for the standard normal quantile.
inline double std_normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * (1.0 + std::erf(mid * 0.7071067811865475244));
    if (cdf < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Hand-rolled linear solves, so the least-squares oracle shares nothing with
// the QR route under test.
inline std::vector<double> solve_gauss(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t k = b.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0)
      throw std::runtime_error("solve_gauss: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < k; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = b[i] / a[i][i];
  return x;
}

struct NormalEquationsFit {
  Eigen::VectorXd coef;
  Eigen::MatrixXd xtx_inv;
  double s2 = 0.0;
  std::int64_t df_resid = 0;
};

// Least squares through the normal equations X'X b = X'y with Gauss-Jordan
// elimination.
inline NormalEquationsFit ols_normal_equations(const Eigen::VectorXd& y,
                                               const Eigen::MatrixXd& design) {
  const auto n = design.rows();
  const auto k = design.cols();
  std::vector<std::vector<double>> xtx(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
  std::vector<double> xty(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) acc += design(r, i) * design(r, j);
      xtx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
    double acc = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) acc += design(r, i) * y(r);
    xty[static_cast<std::size_t>(i)] = acc;
  }

  NormalEquationsFit fit;
  const auto coef = solve_gauss(xtx, xty);
  fit.coef.resize(k);
  for (Eigen::Index i = 0; i < k; ++i)
    fit.coef(i) = coef[static_cast<std::size_t>(i)];

  fit.xtx_inv.resize(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<double> e(static_cast<std::size_t>(k), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = solve_gauss(xtx, e);
    for (Eigen::Index i = 0; i < k; ++i)
      fit.xtx_inv(i, j) = col[static_cast<std::size_t>(i)];
  }

  double rss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double pred = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) pred += design(r, i) * fit.coef(i);
    rss += (y(r) - pred) * (y(r) - pred);
  }
  fit.df_resid = static_cast<std::int64_t>(n - k);
  fit.s2 = rss / static_cast<double>(fit.df_resid);
  return fit;
}

// ---------------------------------------------------------------------------
// Exhaustive L1 search over every interpolating coefficient candidate: the
// optimum of a generic LAD problem interpolates cols rows exactly.
struct BasisSearchResult {
  Eigen::VectorXd coef;
  double objective = 0.0;
};

inline BasisSearchResult lad_basis_search(const Eigen::VectorXd& y,
                                          const Eigen::MatrixXd& design) {
  const auto n = design.rows();
  const auto k = design.cols();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;

  BasisSearchResult best;
  best.objective = std::numeric_limits<double>::infinity();

  while (true) {
    // Solve the interpolation through the selected rows.
    std::vector<std::vector<double>> a(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k)));
    std::vector<double> b(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            design(idx[static_cast<std::size_t>(i)], j);
      b[static_cast<std::size_t>(i)] = y(idx[static_cast<std::size_t>(i)]);
    }
    bool ok = true;
    std::vector<double> cand;
    try {
      cand = solve_gauss(a, b);
    } catch (const std::runtime_error&) {
      ok = false;
    }
    if (ok) {
      double obj = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        double pred = 0.0;
        for (Eigen::Index j = 0; j < k; ++j)
          pred += design(r, j) * cand[static_cast<std::size_t>(j)];
        obj += std::fabs(y(r) - pred);
      }
      if (obj < best.objective) {
        best.objective = obj;
        best.coef.resize(k);
        for (Eigen::Index j = 0; j < k; ++j)
          best.coef(j) = cand[static_cast<std::size_t>(j)];
      }
    }

    // Next combination in lexicographic order.
    Eigen::Index pos = k - 1;
    while (pos >= 0 &&
           idx[static_cast<std::size_t>(pos)] == n - k + pos)
      --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Eigen::Index j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random orthogonal matrix (QR of a Gaussian matrix) for invariance checks.
template <typename Rng>
Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.std_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

}  // namespace oracle
