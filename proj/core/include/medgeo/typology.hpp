#pragma once

#include <string>

#include "medgeo/estimation.hpp"

namespace medgeo {

enum class PapaType { complementary, competitive, indirect_only,
                      none_established };
enum class DirectionalSubtype { d_plementary, d_petitive, not_applicable };

std::string to_string(PapaType type);
std::string to_string(DirectionalSubtype subtype);

/// Classification under the process-and-product criteria (indirect and
/// direct-path tests only) and under the causal-steps criteria (which
/// additionally gate on a significant total effect).
struct TypologyVerdict {
  PapaType papa_type = PapaType::none_established;
  DirectionalSubtype directional_subtype = DirectionalSubtype::not_applicable;
  PapaType causal_steps_type = PapaType::none_established;
  bool erroneous_rejection = false;  // PAPA finds mediation, the gate drops it
  bool d_significant = false;
  Framework framework = Framework::lse_f;
  double alpha = 0.05;
};

/// Indirect significance is max(p_a, p_b) < alpha for the F and Z frameworks
/// and p_ab < alpha for the Sobel framework; all comparisons are strict.
TypologyVerdict classify(const MediationFit& fit, double alpha);

/// Percentage-coefficient effect sizes. Callers must have fitted on 0-1
/// percentized scales; the coefficients are then percentage coefficients.
struct ContributionReport {
  double bp_a = 0, bp_b = 0, bp_ab = 0, bp_d = 0, bp_c = 0;
  double cp_c = 0;   // +1 or -1
  double cp_ab = 0;  // bp_ab / |bp_c|
  double cp_d = 0;   // bp_d / |bp_c|
  double cp_a = 0;   // |bp_a| / (|bp_a| + |bp_b|) * cp_ab
  double cp_b = 0;
};

ContributionReport percent_contributions(const MediationFit& fit);

}  // namespace medgeo
