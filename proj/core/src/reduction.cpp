#include "medgeo/reduction.hpp"

#include <cmath>

#include "medgeo/errors.hpp"

namespace medgeo {

CanonicalCoords canonical_reduce_vectors(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& m,
                                         const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& base) {
  const Eigen::Index n = y.size();
  if (m.size() != n || x.size() != n || base.size() != n)
    throw DomainError("canonical_reduce: column length mismatch");
  if (n < 4)
    throw DomainError("canonical_reduce: needs at least 4 rows");

  // Column order (const, X, M, Y) gives the treatment two nonzero rows and
  // the mediator three.
  Eigen::MatrixXd d(n, 4);
  d.col(0) = base;
  d.col(1) = x;
  d.col(2) = m;
  d.col(3) = y;

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(d);
  Eigen::MatrixXd r = qr.matrixQR()
                          .topRows(4)
                          .template triangularView<Eigen::Upper>();

  static const char* kColNames[] = {"const", "X", "M", "Y"};
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double col_norm = d.col(j).norm();
    if (std::fabs(r(j, j)) <= 1e-10 * std::max(col_norm, 1e-300))
      throw CollinearityError(
          std::string("canonical_reduce: data matrix has rank below 4 (") +
          kColNames[j] + ")");
  }

  // Fix the reflection signs so the new diagonal entries are positive.
  for (Eigen::Index j = 0; j < 4; ++j)
    if (r(j, j) < 0) r.row(j) = -r.row(j);

  CanonicalCoords cc;
  cc.n = static_cast<std::int64_t>(n);
  cc.x1 = r(0, 1);
  cc.x2 = r(1, 1);
  cc.m1 = r(0, 2);
  cc.m2 = r(1, 2);
  cc.m3 = r(2, 2);
  cc.y1 = r(0, 3);
  cc.y2 = r(1, 3);
  cc.y3 = r(2, 3);
  cc.y4 = r(3, 3);
  return cc;
}

CanonicalCoords canonical_reduce(const Dataset& ds, const ModelSpec& spec) {
  if (!spec.controls.empty())
    throw DomainError(
        "canonical_reduce is defined only for the no-controls model; remove "
        "the control variables or use fit_lse/fit_lad");
  const auto cols = model_columns(ds, spec);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(cols.y.size());
  return canonical_reduce_vectors(cols.y, cols.m, cols.x, ones);
}

PathEstimates coords_to_estimates(const CanonicalCoords& cc) {
  PathEstimates est;
  est.a = cc.m2 / cc.x2;
  est.b = cc.y3 / cc.m3;
  est.c = cc.y2 / cc.x2;
  est.d = (cc.m3 * cc.y2 - cc.m2 * cc.y3) / (cc.x2 * cc.m3);
  return est;
}

namespace {

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

GeometryPoint geometry_point(const CanonicalCoords& cc) {
  const auto est = coords_to_estimates(cc);
  GeometryPoint pt;
  pt.n = cc.n;
  pt.r = std::fabs(cc.m2) / cc.m3;
  pt.p = std::fabs(cc.y3) / cc.y4;
  pt.q = std::fabs(cc.y2) / cc.y4;
  pt.sign_abd = sign_of(est.a * est.b * est.d);
  pt.sign_abc = sign_of(est.a * est.b * est.c);
  return pt;
}

}  // namespace medgeo
