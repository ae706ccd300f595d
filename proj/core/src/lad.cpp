#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "medgeo/distributions.hpp"
#include "medgeo/errors.hpp"
#include "medgeo/estimation.hpp"

namespace medgeo {

namespace {

constexpr double kIrlsEps = 1e-8;
constexpr int kIrlsMaxIter = 200;
constexpr double kIrlsTol = 1e-10;

double l1_objective(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
                    const Eigen::VectorXd& coef) {
  return (y - design * coef).cwiseAbs().sum();
}

// Solves the weighted least-squares step of IRLS by row scaling.
Eigen::VectorXd weighted_ls(const Eigen::VectorXd& y,
                            const Eigen::MatrixXd& design,
                            const Eigen::VectorXd& sqrt_w) {
  const Eigen::MatrixXd dw = sqrt_w.asDiagonal() * design;
  const Eigen::VectorXd yw = sqrt_w.asDiagonal() * y;
  return dw.householderQr().solve(yw);
}

// The generic L1 optimum interpolates cols rows exactly. Starting from the
// IRLS iterate, descend over interpolating vertices: enumerate every
// cols-subset of the rows with the smallest |residual| (a window around the
// active set), move to the best strictly improving vertex, repeat until
// fixed. Finite descent; handles ties from quantized data that stall IRLS.
bool vertex_descent(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
                    Eigen::VectorXd& coef, double& objective) {
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  const Eigen::Index window = std::min<Eigen::Index>(n, k + 8);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(k));
  bool moved_any = false;

  for (int round = 0; round < 60; ++round) {
    const Eigen::VectorXd resid = y - design * coef;
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + window, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        return std::fabs(resid(a)) < std::fabs(resid(b));
                      });

    double best_obj = objective;
    Eigen::VectorXd best_coef;

    // All k-subsets of the window, lexicographic.
    for (Eigen::Index i = 0; i < k; ++i)
      pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      Eigen::MatrixXd a(k, k);
      Eigen::VectorXd b(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::Index row = order[static_cast<std::size_t>(
            pick[static_cast<std::size_t>(i)])];
        a.row(i) = design.row(row);
        b(i) = y(row);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.isInvertible()) {
        const Eigen::VectorXd cand = lu.solve(b);
        const double obj = l1_objective(y, design, cand);
        if (obj < best_obj) {
          best_obj = obj;
          best_coef = cand;
        }
      }
      Eigen::Index pos = k - 1;
      while (pos >= 0 &&
             pick[static_cast<std::size_t>(pos)] == window - k + pos)
        --pos;
      if (pos < 0) break;
      ++pick[static_cast<std::size_t>(pos)];
      for (Eigen::Index j = pos + 1; j < k; ++j)
        pick[static_cast<std::size_t>(j)] =
            pick[static_cast<std::size_t>(j - 1)] + 1;
    }

    if (best_obj < objective - 1e-14 * std::max(1.0, objective)) {
      objective = best_obj;
      coef = best_coef;
      moved_any = true;
    } else {
      break;  // no improving vertex in the window: stationary
    }
  }
  return moved_any;
}

// Gaussian-kernel density of the residuals at zero, bandwidth on the
// Hall-Sheather n^(-1/3) schedule scaled by a robust residual spread. The
// n_fitted smallest |residuals| are the interpolated rows of the L1 optimum,
// not draws from the error distribution, and are left out.
double residual_density_at_zero(const Eigen::VectorXd& resid,
                                Eigen::Index n_fitted) {
  const Eigen::Index n = resid.size();
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) kept.push_back(resid(i));
  std::sort(kept.begin(), kept.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  kept.erase(kept.begin(),
             kept.begin() + std::min<Eigen::Index>(n_fitted, n - 1));
  const auto m = static_cast<Eigen::Index>(kept.size());
  if (m < 2) return std::numeric_limits<double>::infinity();

  std::vector<double> sorted = kept;
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[static_cast<std::size_t>(m / 4)];
  const double q3 = sorted[static_cast<std::size_t>((3 * m) / 4)];
  double mean = 0.0;
  for (const double r : kept) mean += r;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (const double r : kept) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  double scale = std::min(sd, (q3 - q1) / 1.349);
  if (scale <= 0.0) scale = sd;
  if (scale <= 0.0) return std::numeric_limits<double>::infinity();

  const double hs_const = 0.9715;  // z_{.975}^{2/3} * (1.5 phi(0)^2)^{1/3}
  const double h =
      hs_const * scale * std::pow(static_cast<double>(m), -1.0 / 3.0);
  double acc = 0.0;
  for (const double r : kept) {
    const double u = r / h;
    acc += std::exp(-0.5 * u * u);
  }
  return acc * 0.3989422804014326779 / (static_cast<double>(m) * h);
}

}  // namespace

LadFit lad_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
               const std::vector<std::string>& col_names) {
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  if (y.size() != n) throw DomainError("lad_fit: y length mismatch");
  if (n <= k) throw DomainError("lad_fit: need more rows than columns");

  // OLS start (also performs the rank check).
  const OlsFit start = ols_fit(y, design, col_names);

  LadFit out;
  out.coef = start.coef;
  Eigen::VectorXd prev = out.coef;
  double prev_obj = l1_objective(y, design, out.coef);
  int flat_count = 0;
  for (out.iterations = 1; out.iterations <= kIrlsMaxIter; ++out.iterations) {
    const Eigen::VectorXd resid = y - design * out.coef;
    const Eigen::VectorXd sqrt_w =
        (resid.array().square() + kIrlsEps).pow(-0.25).matrix();
    out.coef = weighted_ls(y, design, sqrt_w);
    const double change = (out.coef - prev).cwiseAbs().maxCoeff();
    const double ref = std::max(1.0, prev.cwiseAbs().maxCoeff());
    prev = out.coef;
    if (change < kIrlsTol * ref) {
      out.converged = true;
      break;
    }
    // Coefficients can oscillate at rounding scale around a vertex while the
    // objective is already flat; treat a stagnant objective as converged.
    const double obj = l1_objective(y, design, out.coef);
    flat_count =
        std::fabs(obj - prev_obj) <= 1e-12 * std::max(1.0, prev_obj)
            ? flat_count + 1
            : 0;
    prev_obj = obj;
    if (flat_count >= 5) {
      out.converged = true;
      break;
    }
  }

  out.objective = l1_objective(y, design, out.coef);
  vertex_descent(y, design, out.coef, out.objective);
  // The descent terminates at a vertex no window neighbor improves on; treat
  // that stationary point as converged. Only a numerically broken iterate is
  // a failure.
  if (!out.coef.allFinite())
    throw ConvergenceError(
        "lad_fit: iterate became non-finite after " +
        std::to_string(out.iterations) + " IRLS iterations");
  out.converged = true;

  out.residuals = y - design * out.coef;

  // Asymptotic covariance s^2 (X'X)^-1 with s = 1/(2 f(0)).
  const double f0 = residual_density_at_zero(out.residuals, k);
  const double sparsity = std::isinf(f0) ? 0.0 : 1.0 / (2.0 * f0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd xtx_inv = rinv * rinv.transpose();
  out.se = (sparsity * sparsity * xtx_inv.diagonal().cwiseMax(0.0))
               .cwiseSqrt();
  return out;
}

namespace {

struct LadPathStat {
  double coef = 0, se = 0, z = 0, p = 1;
};

LadPathStat lad_path_stat(const LadFit& fit, Eigen::Index idx) {
  LadPathStat s;
  s.coef = fit.coef(idx);
  s.se = fit.se(idx);
  if (s.se > 0) {
    s.z = s.coef / s.se;
    s.p = normal_two_sided_p(s.z);
  } else {
    // Degenerate (perfect-fit) case: the coefficient is either exactly zero
    // or infinitely many standard errors away.
    s.z = s.coef == 0.0 ? 0.0 : std::numeric_limits<double>::infinity() *
                                    (s.coef > 0 ? 1.0 : -1.0);
    s.p = s.coef == 0.0 ? 1.0 : 0.0;
  }
  return s;
}

MediationFit fit_lad_impl(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& base,
                          const Eigen::MatrixXd& controls,
                          const std::vector<std::string>& control_names) {
  const Eigen::Index n = y.size();
  const Eigen::Index k = controls.cols();
  if (m.size() != n || x.size() != n || base.size() != n ||
      (k > 0 && controls.rows() != n))
    throw DomainError("fit_lad: column length mismatch");
  if (n < 3 + k + 2)
    throw DomainError("fit_lad: needs at least cols + 2 complete cases");

  auto design2 = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd d(n, 2 + k);
    d.col(0) = base;
    d.col(1) = v;
    for (Eigen::Index c = 0; c < k; ++c) d.col(2 + c) = controls.col(c);
    return d;
  };
  Eigen::MatrixXd d3(n, 3 + k);
  d3.col(0) = base;
  d3.col(1) = m;
  d3.col(2) = x;
  for (Eigen::Index c = 0; c < k; ++c) d3.col(3 + c) = controls.col(c);

  std::vector<std::string> n2{"const", "X"};
  std::vector<std::string> n3{"const", "M", "X"};
  n2.insert(n2.end(), control_names.begin(), control_names.end());
  n3.insert(n3.end(), control_names.begin(), control_names.end());

  MediationFit fit;
  fit.framework = Framework::lad_z;
  fit.n_used = static_cast<std::int64_t>(n);
  fit.n_controls = static_cast<std::int64_t>(k);

  const LadFit f1 = lad_fit(m, design2(x), n2);
  const auto sa = lad_path_stat(f1, 1);
  fit.i_M_hat = f1.coef(0);
  fit.a_hat = sa.coef;
  fit.se_a = sa.se;
  fit.t_a = sa.z;
  fit.F_a = sa.z * sa.z;
  fit.p_a = sa.p;

  const LadFit f2 = lad_fit(y, d3, n3);
  const auto sb = lad_path_stat(f2, 1);
  const auto sd = lad_path_stat(f2, 2);
  fit.i_Y_hat = f2.coef(0);
  fit.b_hat = sb.coef;
  fit.se_b = sb.se;
  fit.t_b = sb.z;
  fit.F_b = sb.z * sb.z;
  fit.p_b = sb.p;
  fit.d_hat = sd.coef;
  fit.se_d = sd.se;
  fit.t_d = sd.z;
  fit.F_d = sd.z * sd.z;
  fit.p_d = sd.p;

  const LadFit f3 = lad_fit(y, design2(x), n2);
  const auto sc = lad_path_stat(f3, 1);
  fit.i_Ystar_hat = f3.coef(0);
  fit.c_hat = sc.coef;
  fit.se_c = sc.se;
  fit.t_c = sc.z;
  fit.F_c = sc.z * sc.z;
  fit.p_c = sc.p;

  fit.sobel_S = std::numeric_limits<double>::quiet_NaN();
  fit.p_ab = std::numeric_limits<double>::quiet_NaN();
  return fit;
}

}  // namespace

MediationFit fit_lad(const Dataset& ds, const ModelSpec& spec) {
  const auto cols = model_columns(ds, spec);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(cols.y.size());
  return fit_lad_impl(cols.y, cols.m, cols.x, ones, cols.controls,
                      spec.controls);
}

MediationFit fit_lad_vectors(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& base) {
  const Eigen::MatrixXd none(y.size(), 0);
  return fit_lad_impl(y, m, x, base, none, {});
}

}  // namespace medgeo
