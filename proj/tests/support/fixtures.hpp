// Shared test fixtures: seeded mediation datasets and the bundled synthetic
// survey-shaped CSV.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "medgeo/dataset.hpp"
#include "medgeo/rng.hpp"
#include "medgeo/simulation.hpp"

namespace fixtures {

// A generated mediation dataset under the default study configuration.
inline medgeo::Replicate seeded_replicate(std::uint64_t seed,
                                          std::uint64_t stream, int n = 0) {
  medgeo::SimulationConfig config;
  if (n > 0) {
    config.n_min = n;
    config.n_max = n;
  }
  medgeo::RngStream rng(seed, stream);
  return medgeo::generate_replicate(rng, config);
}

inline medgeo::Dataset dataset_from_columns(
    std::vector<std::pair<std::string, std::vector<std::optional<double>>>>
        cols) {
  medgeo::Dataset ds;
  for (auto& [name, values] : cols) ds.add_column(name, std::move(values));
  return ds;
}

inline std::vector<std::optional<double>> observed(std::vector<double> v) {
  std::vector<std::optional<double>> out;
  out.reserve(v.size());
  for (const double x : v) out.emplace_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic survey-shaped fixture: 3,865 rows, nine variables with the same
// conceptual ranges as the survey extract the project's examples describe, and
// missingness arranged so the two standard models have 3,267 and 3,594
// complete cases. Deterministic; the bundled data/synthetic_hints.csv is this
// exact text.
inline std::string synthetic_hints_csv() {
  constexpr int kRows = 3865;
  medgeo::RngStream rng(424242, 0);

  // Deterministic permutation for the missingness masks.
  std::vector<int> perm(kRows);
  for (int i = 0; i < kRows; ++i) perm[i] = i;
  for (int i = kRows - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(0, i));
    std::swap(perm[i], perm[j]);
  }

  // Model 1 uses SF, PD, CG, Age, Income, Education; model 2 uses PA, PD, EM,
  // Age, Gender, Education. Nesting the masks pins the complete-case counts:
  // 3865 - 598 = 3267 and 3865 - 271 = 3594.
  std::vector<bool> miss_cg(kRows, false), miss_sf(kRows, false),
      miss_income(kRows, false), miss_em(kRows, false), miss_pa(kRows, false),
      miss_gender(kRows, false);
  for (int i = 0; i < 598; ++i) miss_cg[perm[i]] = true;
  for (int i = 0; i < 44; ++i) miss_sf[perm[i]] = true;
  for (int i = 100; i < 517; ++i) miss_income[perm[i]] = true;
  for (int i = 598; i < 869; ++i) miss_em[perm[i]] = true;
  for (int i = 598; i < 724; ++i) miss_pa[perm[i]] = true;
  for (int i = 700; i < 800; ++i) miss_gender[perm[i]] = true;

  auto q2 = [](double v) { return std::round(v * 100.0) / 100.0; };
  auto clamp = [](double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
  };

  std::string out = "SF,PD,CG,EM,PA,Age,Income,Education,Gender\n";
  char buf[256];
  for (int i = 0; i < kRows; ++i) {
    const double age = static_cast<double>(rng.uniform_int(18, 104));
    const double income = static_cast<double>(rng.uniform_int(1, 9));
    const double education = static_cast<double>(rng.uniform_int(1, 7));
    const double gender = static_cast<double>(rng.uniform_int(1, 2));
    const double em = static_cast<double>(rng.uniform_int(0, 1));
    const double cg =
        rng.uniform01() < 0.7 ? 0.0 : static_cast<double>(rng.uniform_int(1, 5));

    // Mild mediation structure so end-to-end fits have signal.
    const double pd = q2(clamp(0.45 + 0.35 * cg - 0.25 * em +
                                   0.9 * std::fabs(rng.std_normal()),
                               0.0, 4.0));
    const double sf = q2(clamp(0.05 + 0.30 * pd - 0.02 * cg +
                                   0.45 * std::fabs(rng.std_normal()) - 0.25,
                               0.0, 3.0));
    const double pa_raw =
        (1.0 / std::sqrt(rng.uniform01()) - 1.0) * 90.0 + 60.0 * em -
        25.0 * pd;
    const double pa = std::round(clamp(pa_raw, 0.0, 4620.0));

    auto cell = [&](double v, bool missing, const char* fmt_str) {
      if (missing) return std::string();
      std::snprintf(buf, sizeof(buf), fmt_str, v);
      return std::string(buf);
    };
    out += cell(sf, miss_sf[i], "%.2f") + ",";
    out += cell(pd, false, "%.2f") + ",";
    out += cell(cg, miss_cg[i], "%.0f") + ",";
    out += cell(em, miss_em[i], "%.0f") + ",";
    out += cell(pa, miss_pa[i], "%.0f") + ",";
    out += cell(age, false, "%.0f") + ",";
    out += cell(income, miss_income[i], "%.0f") + ",";
    out += cell(education, false, "%.0f") + ",";
    out += cell(gender, miss_gender[i], "%.0f") + "\n";
  }
  return out;
}

inline std::vector<medgeo::VariableSpec> synthetic_hints_specs() {
  using medgeo::VarRole;
  return {
      {"SF", VarRole::outcome, 0, 3},     {"PD", VarRole::mediator, 0, 4},
      {"CG", VarRole::treatment, 0, 5},   {"EM", VarRole::control, 0, 1},
      {"PA", VarRole::control, 0, 500},   {"Age", VarRole::control, 0, 100},
      {"Income", VarRole::control, 1, 9}, {"Education", VarRole::control, 1, 7},
      {"Gender", VarRole::control, 1, 2},
  };
}

}  // namespace fixtures
