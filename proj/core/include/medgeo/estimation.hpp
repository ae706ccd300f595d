#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "medgeo/dataset.hpp"

namespace medgeo {

enum class Framework { lse_f, lse_sobel, lad_z };

std::string to_string(Framework fw);
Framework framework_from_string(const std::string& s);

/// Names the three model variables, optional controls, and the level used
/// when the fit is classified.
struct ModelSpec {
  std::string outcome;
  std::string mediator;
  std::string treatment;
  std::vector<std::string> controls;
  double alpha = 0.05;
};

/// Result of one least-squares regression.
struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::MatrixXd cov;      // s^2 (X'X)^-1
  Eigen::VectorXd se;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  double s2 = 0.0;          // rss / df_resid
  std::int64_t df_resid = 0;
};

/// Coefficients minimize the sum of squared residuals; covariance uses
/// s^2 = RSS / (n - cols). Rank deficiency raises CollinearityError naming
/// the offending columns when names are supplied.
OlsFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
               const std::vector<std::string>& col_names = {});

/// Result of one least-absolute-deviations regression.
struct LadFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd residuals;
  double objective = 0.0;  // sum of absolute residuals
  int iterations = 0;
  bool converged = false;
};

/// IRLS with eps-smoothing followed by a vertex polish (exact interpolation
/// through the cols smallest-|residual| rows kept when it does not worsen the
/// L1 objective). Standard errors use the sparsity estimate 1/(2*f(0)) with a
/// Gaussian-kernel density of the residuals at zero.
LadFit lad_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
               const std::vector<std::string>& col_names = {});

/// Path estimates, standard errors, test statistics and p-values for the
/// three mediation regressions under one framework.
struct MediationFit {
  Framework framework = Framework::lse_f;
  std::int64_t n_used = 0;
  std::int64_t n_controls = 0;

  double a_hat = 0, b_hat = 0, d_hat = 0, c_hat = 0;
  double i_M_hat = 0, i_Y_hat = 0, i_Ystar_hat = 0;
  double se_a = 0, se_b = 0, se_d = 0, se_c = 0;
  double t_a = 0, t_b = 0, t_d = 0, t_c = 0;   // z ratios under LAD
  double F_a = 0, F_b = 0, F_d = 0, F_c = 0;   // squared ratios
  double p_a = 1, p_b = 1, p_d = 1, p_c = 1;
  double sobel_S = 0;   // NaN under LAD
  double p_ab = 1;      // NaN under LAD

  MediationFit with_framework(Framework fw) const {
    MediationFit out = *this;
    out.framework = fw;
    return out;
  }
};

struct SobelResult {
  double S = 0;
  double p = 1;
};

/// Sobel statistic from the fitted paths and their standard errors, with the
/// two-sided normal p-value.
SobelResult sobel_test(const MediationFit& fit);

/// Least-squares fit of the three regressions M~1+X(+C), Y~1+M+X(+C),
/// Y~1+X(+C); F statistics are squared t ratios with residual degrees of
/// freedom n-2-k and n-3-k.
MediationFit fit_lse(const Dataset& ds, const ModelSpec& spec);

/// Same fit from raw columns; `base` plays the role of the constant column,
/// which lets callers feed jointly transformed data.
MediationFit fit_lse_vectors(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& base);

/// L1 fit of the same three regressions; each path is tested against the
/// standard normal with the LAD asymptotic standard error. The total effect
/// comes from its own regression (no a*b + d identity).
MediationFit fit_lad(const Dataset& ds, const ModelSpec& spec);

MediationFit fit_lad_vectors(const Eigen::VectorXd& y, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& base);

/// Assembles complete cases for the model variables and returns the column
/// vectors used by the fits (outcome, mediator, treatment, controls).
struct ModelColumns {
  Eigen::VectorXd y, m, x;
  Eigen::MatrixXd controls;  // n x k, k possibly 0
  std::int64_t n = 0;
};

ModelColumns model_columns(const Dataset& ds, const ModelSpec& spec);

}  // namespace medgeo
