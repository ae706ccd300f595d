#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "medgeo/reduction.hpp"

namespace medgeo {

/// Thresholds in (r, p, q) coordinates equivalent to the path tests at level
/// alpha: r_crit = [lambda_{1,n-2}(alpha)/(n-2)]^(1/2),
/// p_crit = [lambda_{1,n-3}(alpha)/(n-3)]^(1/2), z_half = z_{alpha/2}.
struct CriticalValues {
  std::int64_t n = 0;
  double alpha = 0;
  double r_crit = 0;
  double p_crit = 0;
  double z_half = 0;
};

CriticalValues critical_values(std::int64_t n, double alpha);

enum class Region { ra, rb, rc, rd, rab_sobel };

std::string to_string(Region region);

/// Exact strict-inequality membership; boundary points are non-members.
/// The rd predicate reads the point's a*b*c sign context.
bool in_region(const GeometryPoint& pt, Region region,
               const CriticalValues& cv);

/// Sobel boundary in p at fixed r: the p0 with
/// 1/[(n-2)r^2] + 1/[(n-3)p0^2] = 1/z_{alpha/2}^2. Defined only when
/// (n-2)r^2 > z_{alpha/2}^2.
double p0_boundary(double r, std::int64_t n, double alpha);

enum class IndirectSubtype { d_plementary, d_petitive };

std::string to_string(IndirectSubtype subtype);
IndirectSubtype indirect_subtype_from_string(const std::string& s);

/// A point where both indirect-path tests reject, the direct-and-remainder
/// test does not, and the total-effect test does not: the total-effect gate
/// would throw away an indirect-only mediation. The d_plementary subtype
/// carries sign a*b*d > 0, the d_petitive subtype sign a*b*d < 0.
GeometryPoint witness_indirect_only(std::int64_t n, double alpha,
                                    IndirectSubtype subtype);

/// A point with all three path tests rejecting under a*b*d < 0 while the
/// total-effect test does not reject; also placed inside the Sobel region
/// with p > p0(r).
GeometryPoint witness_competitive(std::int64_t n, double alpha, int sign_abc);

/// A point in the Sobel indirect region with both the direct-and-remainder
/// and total-effect tests not rejecting. Analytic construction for n large
/// enough; deterministic grid fallback otherwise. Throws
/// WitnessNotFoundError when the grid is exhausted (possible below the
/// sample size the construction needs).
GeometryPoint witness_sobel_io(std::int64_t n, double alpha);

/// Exhaustive grid scan for points that would make the total-effect test
/// informative for complementary mediation: under the a*b*d > 0 sign context
/// it looks for points in Ra n Rb n Rd outside Rc and reports how many it
/// found (expected: zero).
struct SuperfluityReport {
  std::int64_t n = 0;
  double alpha = 0;
  int grid_density = 0;
  double r_lo = 0, r_hi = 0;
  double p_lo = 0, p_hi = 0;
  std::int64_t points_checked = 0;
  std::int64_t violations = 0;
};

SuperfluityReport verify_complementary_superfluous(std::int64_t n, double alpha,
                                                   int grid_density);

/// Boundary polylines in the p-q plane at fixed r, for external plotting.
struct BoundaryPolyline {
  std::string name;
  std::vector<std::array<double, 2>> points;  // (p, q)
};

std::vector<BoundaryPolyline> region_boundary_samples(std::int64_t n,
                                                      double alpha, double r,
                                                      double p_max, int count);

}  // namespace medgeo
