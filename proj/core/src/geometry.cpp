#include "medgeo/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "medgeo/distributions.hpp"
#include "medgeo/errors.hpp"

namespace medgeo {

CriticalValues critical_values(std::int64_t n, double alpha) {
  if (n < 4) throw DomainError("critical_values: n must be >= 4");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("critical_values: alpha outside (0,1)");
  CriticalValues cv;
  cv.n = n;
  cv.alpha = alpha;
  const double nd = static_cast<double>(n);
  cv.r_crit = std::sqrt(f_upper_critical(n - 2, alpha) / (nd - 2.0));
  cv.p_crit = std::sqrt(f_upper_critical(n - 3, alpha) / (nd - 3.0));
  cv.z_half = std_normal_quantile(1.0 - alpha / 2.0);
  return cv;
}

std::string to_string(Region region) {
  switch (region) {
    case Region::ra: return "Ra";
    case Region::rb: return "Rb";
    case Region::rc: return "Rc";
    case Region::rd: return "Rd";
    case Region::rab_sobel: return "Rab_sobel";
  }
  return "Ra";
}

bool in_region(const GeometryPoint& pt, Region region,
               const CriticalValues& cv) {
  if (pt.n != cv.n)
    throw DomainError("in_region: point and critical values disagree on n");
  const double r = pt.r, p = pt.p, q = pt.q;
  switch (region) {
    case Region::ra:
      return r > cv.r_crit;
    case Region::rb:
      return p > cv.p_crit;
    case Region::rc:
      return q > cv.r_crit * std::sqrt(p * p + 1.0);
    case Region::rd: {
      const double bound = cv.p_crit * std::sqrt(r * r + 1.0);
      if (pt.sign_abc >= 0) return std::fabs(q - r * p) > bound;
      return std::fabs(q + r * p) > bound;
    }
    case Region::rab_sobel: {
      if (r <= 0.0 || p <= 0.0) return false;
      const double nd = static_cast<double>(pt.n);
      const double lhs =
          1.0 / ((nd - 2.0) * r * r) + 1.0 / ((nd - 3.0) * p * p);
      return lhs < 1.0 / (cv.z_half * cv.z_half);
    }
  }
  return false;
}

double p0_boundary(double r, std::int64_t n, double alpha) {
  if (n < 4) throw DomainError("p0_boundary: n must be >= 4");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("p0_boundary: alpha outside (0,1)");
  const double z = std_normal_quantile(1.0 - alpha / 2.0);
  const double nd = static_cast<double>(n);
  const double margin = 1.0 / (z * z) - 1.0 / ((nd - 2.0) * r * r);
  if (!(margin > 0.0))
    throw DomainError(
        "p0_boundary: undefined, requires (n-2) r^2 > z_{alpha/2}^2");
  return std::sqrt(1.0 / ((nd - 3.0) * margin));
}

std::string to_string(IndirectSubtype subtype) {
  return subtype == IndirectSubtype::d_plementary ? "d-plementary"
                                                  : "d-petitive";
}

IndirectSubtype indirect_subtype_from_string(const std::string& s) {
  if (s == "d-plementary" || s == "d_plementary")
    return IndirectSubtype::d_plementary;
  if (s == "d-petitive" || s == "d_petitive")
    return IndirectSubtype::d_petitive;
  throw ParseError("unknown subtype: " + s);
}

namespace {

void require(bool ok, const char* what) {
  if (!ok)
    throw Error(std::string("witness construction failed verification: ") +
                what);
}

void verify_memberships(const GeometryPoint& pt, const CriticalValues& cv,
                        bool want_ra, bool want_rb, bool want_rd,
                        bool want_rc) {
  require(in_region(pt, Region::ra, cv) == want_ra, "Ra");
  require(in_region(pt, Region::rb, cv) == want_rb, "Rb");
  require(in_region(pt, Region::rd, cv) == want_rd, "Rd");
  require(in_region(pt, Region::rc, cv) == want_rc, "Rc");
}

}  // namespace

GeometryPoint witness_indirect_only(std::int64_t n, double alpha,
                                    IndirectSubtype subtype) {
  if (n < 5) throw DomainError("witness_indirect_only: n must be >= 5");
  const CriticalValues cv = critical_values(n, alpha);
  const double rc = cv.r_crit, pc = cv.p_crit;

  GeometryPoint pt;
  pt.n = n;

  if (subtype == IndirectSubtype::d_plementary) {
    // Sign context a*b*d > 0 forces a*b*c > 0 and q > rp. The feasible band
    // sits between the q = rp ray and the Rc boundary, which stay apart as
    // long as r stays below r_crit * (1 + 1/p_crit^2)^(1/2).
    const double r_hi = rc * std::sqrt(1.0 + 1.0 / (pc * pc));
    const double r = 0.5 * (rc + r_hi);
    const double p_hi = rc / std::sqrt(r * r - rc * rc);
    const double p = 0.5 * (pc + p_hi);
    const double q_hi = rc * std::sqrt(p * p + 1.0);
    const double q = 0.5 * (r * p + q_hi);
    pt.r = r;
    pt.p = p;
    pt.q = q;
    pt.sign_abd = 1;
    pt.sign_abc = 1;
  } else {
    // Sign context a*b*d < 0 with a*b*c < 0: the non-rejection region for d
    // is the band below -rp + p_crit (r^2+1)^(1/2), which meets p > p_crit
    // for every r > r_crit.
    const double r = 2.0 * rc;
    const double p_hi = pc * std::sqrt(r * r + 1.0) / r;
    const double p = 0.5 * (pc + p_hi);
    const double q_rd = -r * p + pc * std::sqrt(r * r + 1.0);
    const double q_rc = rc * std::sqrt(p * p + 1.0);
    const double q = 0.5 * std::min(q_rd, q_rc);
    pt.r = r;
    pt.p = p;
    pt.q = q;
    pt.sign_abd = -1;
    pt.sign_abc = -1;
  }

  verify_memberships(pt, cv, true, true, false, false);
  return pt;
}

GeometryPoint witness_competitive(std::int64_t n, double alpha, int sign_abc) {
  if (n < 5) throw DomainError("witness_competitive: n must be >= 5");
  if (sign_abc == 0)
    throw DomainError("witness_competitive: sign_abc must be +1 or -1");
  const CriticalValues cv = critical_values(n, alpha);
  const double rc = cv.r_crit, pc = cv.p_crit;

  const double r = 2.0 * rc;
  // Sobel membership needs p above the p0 boundary at this r;
  // (n-2) r^2 = 4 lambda > z^2 always holds here.
  const double p0 = p0_boundary(r, n, alpha);

  GeometryPoint pt;
  pt.n = n;
  pt.r = r;
  pt.sign_abd = -1;
  pt.sign_abc = sign_abc;

  if (sign_abc > 0) {
    // Rd under a*b*c >= 0 is the wedge q < rp - p_crit (r^2+1)^(1/2); it
    // opens once p exceeds p_crit (r^2+1)^(1/2) / r, and small q stays
    // outside Rc.
    const double p_open = pc * std::sqrt(r * r + 1.0) / r;
    const double p = 2.0 * std::max({p_open, pc, p0});
    const double q_rd = r * p - pc * std::sqrt(r * r + 1.0);
    const double q_rc = rc * std::sqrt(p * p + 1.0);
    pt.p = p;
    pt.q = 0.5 * std::min(q_rd, q_rc);
  } else {
    // Rd under a*b*c < 0 is q > -rp + p_crit (r^2+1)^(1/2); for p past
    // p_crit (r^2+1)^(1/2) / r that lower edge is below zero, so any point
    // under the Rc boundary qualifies.
    const double p_open = pc * std::sqrt(r * r + 1.0) / r;
    const double p = 2.0 * std::max({p_open, pc, p0});
    pt.p = p;
    pt.q = 0.5 * rc * std::sqrt(p * p + 1.0);
  }

  verify_memberships(pt, cv, true, true, true, false);
  require(in_region(pt, Region::rab_sobel, cv), "Rab_sobel");
  return pt;
}

GeometryPoint witness_sobel_io(std::int64_t n, double alpha) {
  if (n < 5) throw DomainError("witness_sobel_io: n must be >= 5");
  const CriticalValues cv = critical_values(n, alpha);
  const double rc = cv.r_crit, pc = cv.p_crit, z = cv.z_half;
  const double nd = static_cast<double>(n);

  auto try_point = [&](double r, double p) -> bool {
    // Non-rejection band for d under a*b*c >= 0 around the q = rp ray,
    // clipped by the Rc boundary.
    const double band = pc * std::sqrt(r * r + 1.0);
    const double lo = std::max(0.0, r * p - band);
    const double hi = std::min(rc * std::sqrt(p * p + 1.0), r * p + band);
    if (!(lo < hi)) return false;
    return true;
  };

  auto make_point = [&](double r, double p) {
    const double band = pc * std::sqrt(r * r + 1.0);
    const double lo = std::max(0.0, r * p - band);
    const double hi = std::min(rc * std::sqrt(p * p + 1.0), r * p + band);
    GeometryPoint pt;
    pt.n = n;
    pt.r = r;
    pt.p = p;
    pt.q = 0.5 * (lo + hi);
    pt.sign_abc = pt.q > 0 ? 1 : 0;
    pt.sign_abd = pt.q > r * p ? 1 : (pt.q < r * p ? -1 : 0);
    require(!in_region(pt, Region::rd, cv), "Rd");
    require(!in_region(pt, Region::rc, cv), "Rc");
    require(in_region(pt, Region::rab_sobel, cv), "Rab_sobel");
    return pt;
  };

  // Analytic construction: r_n^2 = 2 z^2 / (n-2) gives p0^2 = 2 z^2 / (n-3);
  // it works whenever p0(r_n) stays below p_crit (r_n^2+1)^(1/2) / r_n.
  const double r_n = std::sqrt(2.0) * z / std::sqrt(nd - 2.0);
  const double p0_rn = p0_boundary(r_n, n, alpha);
  const double p_cap = pc * std::sqrt(r_n * r_n + 1.0) / r_n;
  if (p0_rn < p_cap) {
    const double p = std::min(1.05 * p0_rn, 0.5 * (p0_rn + p_cap));
    if (try_point(r_n, p)) return make_point(r_n, p);
  }

  // Deterministic grid fallback: log-spaced r above the Sobel floor,
  // linear p above p0(r).
  const double r_floor = z / std::sqrt(nd - 2.0);
  for (int i = 1; i <= 400; ++i) {
    const double r = r_floor * std::pow(10.0, 2.0 * i / 400.0);
    double p0r;
    try {
      p0r = p0_boundary(r, n, alpha);
    } catch (const DomainError&) {
      continue;
    }
    for (int j = 1; j <= 400; ++j) {
      const double p = p0r * (1.0 + 0.05 * j);
      if (try_point(r, p)) return make_point(r, p);
    }
  }
  throw WitnessNotFoundError(
      "witness_sobel_io: grid search exhausted at n = " + std::to_string(n) +
      ", alpha = " + std::to_string(alpha) +
      "; sample size is likely below the threshold the construction needs");
}

SuperfluityReport verify_complementary_superfluous(std::int64_t n, double alpha,
                                                   int grid_density) {
  if (grid_density < 100)
    throw DomainError("verify_complementary_superfluous: density below 100");
  const CriticalValues cv = critical_values(n, alpha);
  const double rc = cv.r_crit, pc = cv.p_crit;

  SuperfluityReport report;
  report.n = n;
  report.alpha = alpha;
  report.grid_density = grid_density;
  report.r_lo = rc;
  report.r_hi = 10.0 * rc;
  report.p_lo = 0.0;
  report.p_hi = 10.0 * pc;

  // Complementary sign context: a*b*d > 0, hence a*b*c > 0 and q > rp; Rd
  // membership reduces to q > rp + p_crit (r^2+1)^(1/2). Scan the q slab
  // below the Rc boundary for any such point.
  const int d = grid_density;
  for (int i = 1; i <= d; ++i) {
    const double r = rc + (report.r_hi - rc) * i / d;
    const double rd_offset = pc * std::sqrt(r * r + 1.0);
    for (int j = 1; j <= d; ++j) {
      const double p = pc + (report.p_hi - pc) * j / d;
      const double q_rc = rc * std::sqrt(p * p + 1.0);
      const double rd_lo = r * p + rd_offset;
      for (int k = 0; k <= d; ++k) {
        const double q = q_rc * k / d;
        ++report.points_checked;
        if (q > rd_lo && q > r * p) ++report.violations;
      }
    }
  }
  return report;
}

std::vector<BoundaryPolyline> region_boundary_samples(std::int64_t n,
                                                      double alpha, double r,
                                                      double p_max, int count) {
  if (!(r > 0)) throw DomainError("region_boundary_samples: r must be > 0");
  if (count < 2) throw DomainError("region_boundary_samples: count < 2");
  const CriticalValues cv = critical_values(n, alpha);
  const double rc = cv.r_crit, pc = cv.p_crit;
  const double band = pc * std::sqrt(r * r + 1.0);

  std::vector<BoundaryPolyline> out(4);
  out[0].name = "rc_boundary";
  out[1].name = "rd_upper_same_sign";
  out[2].name = "rd_lower_same_sign";
  out[3].name = "rd_opposite_sign";
  for (int i = 0; i < count; ++i) {
    const double p = p_max * i / (count - 1);
    out[0].points.push_back({p, rc * std::sqrt(p * p + 1.0)});
    out[1].points.push_back({p, r * p + band});
    out[2].points.push_back({p, std::max(0.0, r * p - band)});
    out[3].points.push_back({p, std::max(0.0, -r * p + band)});
  }
  return out;
}

}  // namespace medgeo
