#include "medgeo/typology.hpp"

#include <cmath>

#include "medgeo/errors.hpp"

namespace medgeo {

std::string to_string(PapaType type) {
  switch (type) {
    case PapaType::complementary: return "complementary";
    case PapaType::competitive: return "competitive";
    case PapaType::indirect_only: return "indirect_only";
    case PapaType::none_established: return "none_established";
  }
  return "none_established";
}

std::string to_string(DirectionalSubtype subtype) {
  switch (subtype) {
    case DirectionalSubtype::d_plementary: return "d-plementary";
    case DirectionalSubtype::d_petitive: return "d-petitive";
    case DirectionalSubtype::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

TypologyVerdict classify(const MediationFit& fit, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("classify: alpha outside (0,1)");
  if (fit.framework == Framework::lse_sobel && std::isnan(fit.p_ab))
    throw DomainError("classify: Sobel framework requires p_ab");

  TypologyVerdict v;
  v.framework = fit.framework;
  v.alpha = alpha;

  const bool ab_sig = fit.framework == Framework::lse_sobel
                          ? fit.p_ab < alpha
                          : (fit.p_a < alpha && fit.p_b < alpha);
  const bool d_sig = fit.p_d < alpha;
  const bool c_sig = fit.p_c < alpha;
  const double abd = fit.a_hat * fit.b_hat * fit.d_hat;
  v.d_significant = d_sig;

  if (ab_sig && d_sig) {
    v.papa_type = abd < 0 ? PapaType::competitive : PapaType::complementary;
  } else if (ab_sig) {
    v.papa_type = PapaType::indirect_only;
    if (abd > 0) {
      v.directional_subtype = DirectionalSubtype::d_plementary;
    } else if (abd < 0) {
      v.directional_subtype = DirectionalSubtype::d_petitive;
    }
  } else {
    v.papa_type = PapaType::none_established;
  }

  v.causal_steps_type = c_sig ? v.papa_type : PapaType::none_established;
  v.erroneous_rejection = v.papa_type != PapaType::none_established &&
                          v.causal_steps_type == PapaType::none_established;
  return v;
}

ContributionReport percent_contributions(const MediationFit& fit) {
  ContributionReport r;
  r.bp_a = fit.a_hat;
  r.bp_b = fit.b_hat;
  r.bp_ab = fit.a_hat * fit.b_hat;
  r.bp_d = fit.d_hat;
  r.bp_c = fit.c_hat;
  if (r.bp_c == 0.0)
    throw DomainError(
        "percent_contributions: undefined, total-effect coefficient is zero");
  const double abs_c = std::fabs(r.bp_c);
  r.cp_c = r.bp_c / abs_c;
  r.cp_ab = r.bp_ab / abs_c;
  r.cp_d = r.bp_d / abs_c;
  const double split = std::fabs(r.bp_a) + std::fabs(r.bp_b);
  if (split == 0.0)
    throw DomainError(
        "percent_contributions: leg split undefined, |a| + |b| is zero");
  r.cp_a = std::fabs(r.bp_a) / split * r.cp_ab;
  r.cp_b = std::fabs(r.bp_b) / split * r.cp_ab;
  return r;
}

}  // namespace medgeo
