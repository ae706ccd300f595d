#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "medgeo/errors.hpp"
#include "medgeo/estimation.hpp"
#include "medgeo/typology.hpp"

using namespace medgeo;

namespace {

MediationFit fixture_fit(double a, double b, double d, double c, double p_a,
                         double p_b, double p_d, double p_c,
                         Framework fw = Framework::lse_f) {
  MediationFit fit;
  fit.framework = fw;
  fit.a_hat = a;
  fit.b_hat = b;
  fit.d_hat = d;
  fit.c_hat = c;
  fit.p_a = p_a;
  fit.p_b = p_b;
  fit.p_d = p_d;
  fit.p_c = p_c;
  fit.p_ab = std::min(1.0, std::max(p_a, p_b));
  return fit;
}

// Published survey model 1: positive indirect path, small negative direct
// path, near-zero total effect.
MediationFit model1_fit() {
  return fixture_fit(0.1631, 0.1012, -0.0167, 0.000014, 0.0005, 0.0005,
                     0.6411, 0.9997);
}

// Published survey model 2: both paths negativexnegative/positive.
MediationFit model2_fit() {
  return fixture_fit(-0.0656, -0.1552, 0.0243, 0.0342, 0.0005, 0.0005, 0.2704,
                     0.1169);
}

}  // namespace

TEST_CASE("directionally competitive indirect-only fixture") {
  const auto v = classify(model1_fit(), 0.05);
  CHECK(v.papa_type == PapaType::indirect_only);
  CHECK(v.directional_subtype == DirectionalSubtype::d_petitive);
  CHECK(v.causal_steps_type == PapaType::none_established);
  CHECK(v.erroneous_rejection);
  CHECK_FALSE(v.d_significant);
}

TEST_CASE("directionally complementary indirect-only fixture") {
  const auto v = classify(model2_fit(), 0.05);
  CHECK(v.papa_type == PapaType::indirect_only);
  CHECK(v.directional_subtype == DirectionalSubtype::d_plementary);
  CHECK(v.causal_steps_type == PapaType::none_established);
  CHECK(v.erroneous_rejection);
}

TEST_CASE("nothing significant gives none_established") {
  const auto v =
      classify(fixture_fit(0.2, 0.3, 0.1, 0.16, 0.4, 0.5, 0.6, 0.7), 0.05);
  CHECK(v.papa_type == PapaType::none_established);
  CHECK(v.directional_subtype == DirectionalSubtype::not_applicable);
  CHECK_FALSE(v.erroneous_rejection);
}

TEST_CASE("complementary and competitive need both paths significant") {
  const auto comp =
      classify(fixture_fit(0.4, 0.5, 0.2, 0.4, 0.001, 0.001, 0.01, 0.001),
               0.05);
  CHECK(comp.papa_type == PapaType::complementary);
  CHECK(comp.causal_steps_type == PapaType::complementary);
  CHECK_FALSE(comp.erroneous_rejection);

  const auto compet =
      classify(fixture_fit(0.4, 0.5, -0.2, 0.0, 0.001, 0.001, 0.01, 0.8),
               0.05);
  CHECK(compet.papa_type == PapaType::competitive);
  CHECK(compet.causal_steps_type == PapaType::none_established);
  CHECK(compet.erroneous_rejection);
}

TEST_CASE("the total-effect gate alone flips the causal-steps verdict") {
  auto fit = fixture_fit(0.4, 0.5, 0.05, 0.25, 0.001, 0.001, 0.5, 0.2);
  const auto gated = classify(fit, 0.05);
  CHECK(gated.papa_type == PapaType::indirect_only);
  CHECK(gated.erroneous_rejection);

  fit.p_c = 0.01;
  const auto passed = classify(fit, 0.05);
  CHECK(passed.papa_type == PapaType::indirect_only);
  CHECK(passed.causal_steps_type == PapaType::indirect_only);
  CHECK_FALSE(passed.erroneous_rejection);
}

TEST_CASE("Sobel framework classifies from the product test") {
  auto fit = fixture_fit(0.4, 0.5, 0.05, 0.25, 0.2, 0.2, 0.5, 0.9,
                         Framework::lse_sobel);
  fit.p_ab = 0.01;  // product test rejects even though the separate tests do not
  const auto v = classify(fit, 0.05);
  CHECK(v.papa_type == PapaType::indirect_only);

  fit.p_ab = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(classify(fit, 0.05), DomainError);
}

TEST_CASE("erroneous flag is monotone while the significance pattern holds") {
  const auto fit = fixture_fit(0.4, 0.5, 0.05, 0.25, 0.01, 0.015, 0.5, 0.4);
  const auto v1 = classify(fit, 0.05);
  REQUIRE(v1.erroneous_rejection);
  // Raise the level while keeping p_c above it and the significant ones below.
  for (const double alpha : {0.1, 0.2, 0.3}) {
    const auto v = classify(fit, alpha);
    CHECK(v.erroneous_rejection);
  }
}

TEST_CASE("classify rejects a bad level") {
  CHECK_THROWS_AS(classify(model1_fit(), 0.0), DomainError);
  CHECK_THROWS_AS(classify(model1_fit(), 1.0), DomainError);
}

TEST_CASE("an exactly zero path product leaves the subtype open") {
  const auto v =
      classify(fixture_fit(0.4, 0.5, 0.0, 0.2, 0.001, 0.001, 0.9, 0.8), 0.05);
  CHECK(v.papa_type == PapaType::indirect_only);
  CHECK(v.directional_subtype == DirectionalSubtype::not_applicable);
}

TEST_CASE("percent contributions reproduce the published effect sizes") {
  const auto r1 = percent_contributions(model1_fit());
  // 0.1631 * 0.1012 / 0.000014, in percent: about 117,900%.
  CHECK(r1.cp_ab * 100.0 == doctest::Approx(117857.0).epsilon(0.01));
  CHECK(r1.cp_c == 1.0);

  const auto r2 = percent_contributions(model2_fit());
  CHECK(r2.cp_d * 100.0 == doctest::Approx(71.0).epsilon(0.015));
}

TEST_CASE("contribution identities") {
  const auto fit = fixture_fit(0.3, -0.4, 0.25, 0.3 * -0.4 + 0.25, 0.01, 0.01,
                               0.01, 0.01);
  const auto r = percent_contributions(fit);
  CHECK(std::fabs(r.cp_c) == 1.0);
  CHECK(r.cp_ab + r.cp_d ==
        doctest::Approx(r.cp_c).epsilon(1e-8));  // inherited from c = ab + d
  CHECK(std::fabs(r.cp_a) + std::fabs(r.cp_b) ==
        doctest::Approx(std::fabs(r.cp_ab)).epsilon(1e-12));
}

TEST_CASE("contribution errors") {
  CHECK_THROWS_AS(percent_contributions(
                      fixture_fit(0.3, 0.4, 0.1, 0.0, 0.1, 0.1, 0.1, 0.1)),
                  DomainError);
  CHECK_THROWS_AS(percent_contributions(
                      fixture_fit(0.0, 0.0, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1)),
                  DomainError);
}
