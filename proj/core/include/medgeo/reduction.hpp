#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "medgeo/dataset.hpp"
#include "medgeo/estimation.hpp"

namespace medgeo {

/// The nonzero entries left after rotating the data matrix so the constant
/// column spans the first axis, the treatment the first two, the mediator the
/// first three and the outcome the first four: X -> (x1, x2, 0, ...),
/// M -> (m1, m2, m3, 0, ...), Y -> (y1, y2, y3, y4, 0, ...), with
/// x2, m3, y4 > 0.
struct CanonicalCoords {
  double x1 = 0, x2 = 0;
  double m1 = 0, m2 = 0, m3 = 0;
  double y1 = 0, y2 = 0, y3 = 0, y4 = 0;
  std::int64_t n = 0;
};

/// Scale-free coordinates r = |m2|/m3, p = |y3|/y4, q = |y2|/y4, with the
/// sign contexts of a*b*d and a*b*c.
struct GeometryPoint {
  double r = 0, p = 0, q = 0;
  std::int64_t n = 0;
  int sign_abd = 0;
  int sign_abc = 0;
};

struct PathEstimates {
  double a = 0, b = 0, c = 0, d = 0;
};

/// Orthogonal reduction of the no-controls model. The model must have an
/// empty control list; rank below 4 raises CollinearityError.
CanonicalCoords canonical_reduce(const Dataset& ds, const ModelSpec& spec);

/// Same reduction from raw columns; `base` plays the role of the constant.
CanonicalCoords canonical_reduce_vectors(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& m,
                                         const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& base);

/// Closed-form path estimates: a = m2/x2, b = y3/m3, c = y2/x2,
/// d = (m3 y2 - m2 y3) / (x2 m3).
PathEstimates coords_to_estimates(const CanonicalCoords& cc);

GeometryPoint geometry_point(const CanonicalCoords& cc);

}  // namespace medgeo
