#include "medgeo/estimation.hpp"

#include <cmath>
#include <limits>

#include "medgeo/distributions.hpp"
#include "medgeo/errors.hpp"

namespace medgeo {

std::string to_string(Framework fw) {
  switch (fw) {
    case Framework::lse_f: return "LSE-F";
    case Framework::lse_sobel: return "LSE-Sobel";
    case Framework::lad_z: return "LAD-Z";
  }
  return "LSE-F";
}

Framework framework_from_string(const std::string& s) {
  if (s == "LSE-F" || s == "lse-f") return Framework::lse_f;
  if (s == "LSE-Sobel" || s == "lse-sobel") return Framework::lse_sobel;
  if (s == "LAD-Z" || s == "lad-z") return Framework::lad_z;
  throw ParseError("unknown framework: " + s);
}

namespace detail {

// Rank check on the R diagonal of an unpivoted QR, relative to column norms.
void check_full_rank(const Eigen::MatrixXd& design,
                     const Eigen::MatrixXd& qr_matrix,
                     const std::vector<std::string>& col_names) {
  const auto cols = design.cols();
  std::string offenders;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double col_norm = design.col(j).norm();
    const double diag = std::fabs(qr_matrix(j, j));
    if (diag <= 1e-10 * std::max(col_norm, 1e-300)) {
      if (!offenders.empty()) offenders += ", ";
      offenders += j < static_cast<Eigen::Index>(col_names.size())
                       ? col_names[j]
                       : ("column " + std::to_string(j));
    }
  }
  if (!offenders.empty())
    throw CollinearityError("design is rank deficient (" + offenders + ")");
}

}  // namespace detail

OlsFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
               const std::vector<std::string>& col_names) {
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  if (y.size() != n) throw DomainError("ols_fit: y length mismatch");
  if (n <= k)
    throw DomainError("ols_fit: need more rows than columns (" +
                      std::to_string(n) + " x " + std::to_string(k) + ")");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  detail::check_full_rank(design, qr.matrixQR(), col_names);

  OlsFit out;
  out.coef = qr.solve(y);
  out.residuals = y - design * out.coef;
  out.rss = out.residuals.squaredNorm();
  out.df_resid = static_cast<std::int64_t>(n - k);
  out.s2 = out.rss / static_cast<double>(out.df_resid);

  // (X'X)^-1 = R^-1 R^-T from the triangular factor.
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd xtx_inv = rinv * rinv.transpose();
  out.cov = out.s2 * xtx_inv;
  out.se = out.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

namespace {

struct PathStat {
  double coef = 0, se = 0, t = 0, F = 0, p = 1;
};

PathStat path_stat(const OlsFit& fit, Eigen::Index idx) {
  PathStat s;
  s.coef = fit.coef(idx);
  s.se = fit.se(idx);
  s.t = s.se > 0 ? s.coef / s.se : 0.0;
  s.F = s.t * s.t;
  s.p = f_pvalue(s.F, fit.df_resid);
  return s;
}

Eigen::MatrixXd with_controls(std::initializer_list<const Eigen::VectorXd*>
                                  cols,
                              const Eigen::MatrixXd& controls) {
  const Eigen::Index n = (*cols.begin())->size();
  Eigen::MatrixXd design(n, static_cast<Eigen::Index>(cols.size()) +
                                controls.cols());
  Eigen::Index j = 0;
  for (const auto* c : cols) design.col(j++) = *c;
  for (Eigen::Index c = 0; c < controls.cols(); ++c)
    design.col(j++) = controls.col(c);
  return design;
}

std::vector<std::string> names_with_controls(
    std::initializer_list<std::string> base,
    const std::vector<std::string>& controls) {
  std::vector<std::string> out(base);
  out.insert(out.end(), controls.begin(), controls.end());
  return out;
}

MediationFit fit_lse_impl(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& base,
                          const Eigen::MatrixXd& controls,
                          const std::vector<std::string>& control_names) {
  const Eigen::Index n = y.size();
  const Eigen::Index k = controls.cols();
  if (m.size() != n || x.size() != n || base.size() != n ||
      (k > 0 && controls.rows() != n))
    throw DomainError("fit_lse: column length mismatch");
  if (n < 3 + k + 2)
    throw DomainError("fit_lse: needs at least cols + 2 complete cases");

  MediationFit fit;
  fit.framework = Framework::lse_f;
  fit.n_used = static_cast<std::int64_t>(n);
  fit.n_controls = static_cast<std::int64_t>(k);

  // M ~ base + X (+ controls)
  const auto d1 = with_controls({&base, &x}, controls);
  const auto f1 = ols_fit(m, d1, names_with_controls({"const", "X"},
                                                     control_names));
  const auto sa = path_stat(f1, 1);
  fit.i_M_hat = f1.coef(0);
  fit.a_hat = sa.coef;
  fit.se_a = sa.se;
  fit.t_a = sa.t;
  fit.F_a = sa.F;
  fit.p_a = sa.p;

  // Y ~ base + M + X (+ controls)
  const auto d2 = with_controls({&base, &m, &x}, controls);
  const auto f2 = ols_fit(y, d2, names_with_controls({"const", "M", "X"},
                                                     control_names));
  const auto sb = path_stat(f2, 1);
  const auto sd = path_stat(f2, 2);
  fit.i_Y_hat = f2.coef(0);
  fit.b_hat = sb.coef;
  fit.se_b = sb.se;
  fit.t_b = sb.t;
  fit.F_b = sb.F;
  fit.p_b = sb.p;
  fit.d_hat = sd.coef;
  fit.se_d = sd.se;
  fit.t_d = sd.t;
  fit.F_d = sd.F;
  fit.p_d = sd.p;

  // Y ~ base + X (+ controls): same design as the mediator regression.
  const auto f3 =
      ols_fit(y, d1, names_with_controls({"const", "X"}, control_names));
  const auto sc = path_stat(f3, 1);
  fit.i_Ystar_hat = f3.coef(0);
  fit.c_hat = sc.coef;
  fit.se_c = sc.se;
  fit.t_c = sc.t;
  fit.F_c = sc.F;
  fit.p_c = sc.p;

  const auto sobel = sobel_test(fit);
  fit.sobel_S = sobel.S;
  fit.p_ab = sobel.p;
  return fit;
}

}  // namespace

SobelResult sobel_test(const MediationFit& fit) {
  if (!(fit.se_a > 0) || !(fit.se_b > 0))
    throw DomainError("sobel_test: degenerate fit with zero standard error");
  SobelResult out;
  const double var =
      fit.a_hat * fit.a_hat * fit.se_b * fit.se_b +
      fit.b_hat * fit.b_hat * fit.se_a * fit.se_a;
  if (var == 0.0) {
    out.S = 0.0;
    out.p = 1.0;
    return out;
  }
  out.S = fit.a_hat * fit.b_hat / std::sqrt(var);
  out.p = normal_two_sided_p(out.S);
  return out;
}

ModelColumns model_columns(const Dataset& ds, const ModelSpec& spec) {
  if (spec.outcome == spec.mediator || spec.outcome == spec.treatment ||
      spec.mediator == spec.treatment)
    throw DomainError("model spec: outcome, mediator, treatment must differ");

  std::vector<std::string> vars{spec.outcome, spec.mediator, spec.treatment};
  vars.insert(vars.end(), spec.controls.begin(), spec.controls.end());
  const Dataset cc = complete_cases(ds, vars);
  const auto n = static_cast<Eigen::Index>(cc.n_raw());

  ModelColumns out;
  out.n = static_cast<std::int64_t>(n);
  auto to_vec = [&](const std::string& name) {
    const auto& col = cc.column(name);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = *col[i];
    return v;
  };
  out.y = to_vec(spec.outcome);
  out.m = to_vec(spec.mediator);
  out.x = to_vec(spec.treatment);
  out.controls.resize(n, static_cast<Eigen::Index>(spec.controls.size()));
  for (std::size_t j = 0; j < spec.controls.size(); ++j)
    out.controls.col(static_cast<Eigen::Index>(j)) = to_vec(spec.controls[j]);
  return out;
}

MediationFit fit_lse(const Dataset& ds, const ModelSpec& spec) {
  const auto cols = model_columns(ds, spec);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(cols.y.size());
  return fit_lse_impl(cols.y, cols.m, cols.x, ones, cols.controls,
                      spec.controls);
}

MediationFit fit_lse_vectors(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& base) {
  const Eigen::MatrixXd none(y.size(), 0);
  return fit_lse_impl(y, m, x, base, none, {});
}

}  // namespace medgeo
