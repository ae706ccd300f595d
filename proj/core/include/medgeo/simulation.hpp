#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "medgeo/dataset.hpp"
#include "medgeo/estimation.hpp"
#include "medgeo/rng.hpp"

namespace medgeo {

struct SimulationConfig {
  std::int64_t replicates = 10000;
  int n_min = 10;
  int n_max = 100;
  double param_min = -1.0;  // range for intercepts and path coefficients
  double param_max = 1.0;
  std::uint64_t seed = 20240901;
  std::vector<Framework> frameworks{Framework::lse_f, Framework::lse_sobel,
                                    Framework::lad_z};
  int alpha_grid_size = 1000;
  double alpha_lo = 0.01;
  double alpha_hi = 0.99;
  int threads = 1;
};

struct TrueParams {
  double i_m = 0, i_y = 0, a = 0, b = 0, d = 0;
  double sigma2_m = 1, sigma2_y = 1;
};

/// One generated dataset: X i.i.d. standard normal, the mediator and outcome
/// from the two linear equations with normal noise at the sampled variances.
struct Replicate {
  int n = 0;
  TrueParams params;
  Eigen::VectorXd x, m, y;

  Dataset to_dataset() const;
};

Replicate generate_replicate(RngStream& rng, const SimulationConfig& config);

/// Per-framework p-values and estimate-sign contexts for one replicate.
struct FrameworkPvalues {
  double p_a = 1, p_b = 1, p_d = 1, p_c = 1;
  double p_ab = 1;  // NaN where the framework has no product test
  int sign_abd = 0;
  int sign_abc = 0;
};

struct ReplicateRecord {
  std::int64_t index = 0;
  int n = 0;
  TrueParams params;
  FrameworkPvalues lse;  // shared by the F and Sobel frameworks
  FrameworkPvalues lad;
  int attempts = 1;  // > 1 when a degenerate draw was regenerated
};

enum class Condition { io_all, io_dplementary, io_dpetitive, competitive };

std::string to_string(Condition c);
std::string to_string_short(Condition c);

/// Proportion of replicates with p_c >= alpha among those meeting the
/// condition, over the alpha grid; numerators and denominators are kept so
/// empty conditions are distinguishable from zero proportions.
struct ConditionCurve {
  Framework framework = Framework::lse_f;
  Condition condition = Condition::io_all;
  std::vector<double> alpha;
  std::vector<std::int64_t> numerator;
  std::vector<std::int64_t> denominator;
  std::vector<double> proportion;  // NaN where denominator is zero
};

struct SimulationReport {
  int schema_version = 1;
  SimulationConfig config;
  std::vector<ReplicateRecord> records;
  std::vector<ConditionCurve> curves;
  std::int64_t regenerated = 0;  // degenerate draws replaced
};

/// Does the replicate meet the condition at this alpha under this framework?
bool condition_holds(const ReplicateRecord& rec, Framework fw, Condition cond,
                     double alpha);

/// p_c for the framework (the F-test p under both least-squares frameworks).
double total_effect_pvalue(const ReplicateRecord& rec, Framework fw);

/// Runs the full study: generates replicates on per-replicate substreams
/// (bit-identical output for any thread count), fits every requested
/// framework, and aggregates the condition curves.
SimulationReport run_study(const SimulationConfig& config);

enum class ReportFormat { csv, json };

/// Writes records and curves under `dir` (records.csv + curves.csv, or
/// report.json). Numbers round-trip exactly.
void export_report(const SimulationReport& report, const std::string& dir,
                   ReportFormat format);

SimulationReport import_report_json(const std::string& path);
std::vector<ConditionCurve> import_curves_csv(const std::string& path);
std::vector<ReplicateRecord> import_records_csv(const std::string& path);

/// Grid of alpha levels: `size` evenly spaced points from lo to hi inclusive.
std::vector<double> alpha_grid(int size, double lo, double hi);

}  // namespace medgeo
