#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace medgeo {

enum class VarRole { outcome, mediator, treatment, control };

std::string to_string(VarRole role);
VarRole var_role_from_string(const std::string& s);

/// One variable of a model: its column name, role, and the conceptual range
/// used to map raw scores onto the 0-1 percentage scale.
struct VariableSpec {
  std::string name;
  VarRole role = VarRole::control;
  double conceptual_min = 0.0;
  double conceptual_max = 1.0;
};

/// Column-oriented table with per-cell missingness.
class Dataset {
 public:
  Dataset() = default;

  /// Adds a column; all columns must end up with equal length.
  void add_column(std::string name, std::vector<std::optional<double>> values);

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  const std::vector<std::optional<double>>& column(
      const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }
  std::size_t n_raw() const { return n_raw_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::optional<double>>> columns_;
  std::size_t n_raw_ = 0;
};

struct VariableSummary {
  std::string variable;
  std::size_t n = 0;       // non-missing count
  bool empty = false;      // no non-missing entries; stats below unset
  double raw_min = 0, raw_max = 0, raw_mean = 0, raw_sd = 0;
  double ps_min = 0, ps_max = 0, ps_mean = 0, ps_sd = 0;
};

struct DescriptiveSummary {
  std::vector<VariableSummary> rows;
};

/// Maps a raw score onto the 0-1 percentage scale given the conceptual range.
/// Scores outside the range map outside [0,1]; no clamping.
double percentize(double value, double c_min, double c_max);

/// Loads the declared columns from a comma-separated file (first row header,
/// "." decimal point). Blank cells become missing; any other unparseable cell
/// is a ParseError naming the row and column.
Dataset load_csv(const std::string& path,
                 const std::vector<VariableSpec>& specs);

/// Per-variable descriptive statistics over non-missing entries, on the raw
/// scale and the percentized scale.
DescriptiveSummary describe(const Dataset& ds,
                            const std::vector<VariableSpec>& specs);

/// Listwise deletion: drops every row with a missing value in any of `vars`.
Dataset complete_cases(const Dataset& ds,
                       const std::vector<std::string>& vars);

/// Copy of the dataset with the declared columns mapped to the 0-1 scale.
Dataset percentized(const Dataset& ds, const std::vector<VariableSpec>& specs);

/// Fixed column order: variable, n, raw_min, raw_max, raw_mean, raw_sd,
/// ps_min, ps_max, ps_mean, ps_sd.
std::string summary_to_csv(const DescriptiveSummary& summary);
std::string summary_to_json(const DescriptiveSummary& summary);

}  // namespace medgeo
