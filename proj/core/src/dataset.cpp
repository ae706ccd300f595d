#include "medgeo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "medgeo/errors.hpp"

#include <nlohmann/json.hpp>

namespace medgeo {

std::string to_string(VarRole role) {
  switch (role) {
    case VarRole::outcome: return "outcome";
    case VarRole::mediator: return "mediator";
    case VarRole::treatment: return "treatment";
    case VarRole::control: return "control";
  }
  return "control";
}

VarRole var_role_from_string(const std::string& s) {
  if (s == "outcome") return VarRole::outcome;
  if (s == "mediator") return VarRole::mediator;
  if (s == "treatment") return VarRole::treatment;
  if (s == "control") return VarRole::control;
  throw ParseError("unknown variable role: " + s);
}

void Dataset::add_column(std::string name,
                         std::vector<std::optional<double>> values) {
  if (index_.count(name) > 0)
    throw SchemaError("duplicate column: " + name);
  if (!columns_.empty() && values.size() != n_raw_)
    throw SchemaError("column " + name + " has length " +
                      std::to_string(values.size()) + ", expected " +
                      std::to_string(n_raw_));
  if (columns_.empty()) n_raw_ = values.size();
  index_.emplace(name, columns_.size());
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

const std::vector<std::optional<double>>& Dataset::column(
    const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw SchemaError("no such column: " + name);
  return columns_[it->second];
}

double percentize(double value, double c_min, double c_max) {
  if (!(c_max > c_min))
    throw DomainError("percentize: conceptual_max must exceed conceptual_min");
  return (value - c_min) / (c_max - c_min);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Dataset load_csv(const std::string& path,
                 const std::vector<VariableSpec>& specs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF)
    line.erase(0, 3);  // UTF-8 BOM

  const auto header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> col_pos;
  for (std::size_t i = 0; i < header.size(); ++i)
    col_pos.emplace(unquote(trim(header[i])), i);

  for (const auto& spec : specs) {
    if (col_pos.count(spec.name) == 0)
      throw SchemaError(path + ": missing column \"" + spec.name + "\"");
  }

  std::vector<std::vector<std::optional<double>>> data(specs.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(path + ": row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const std::string cell = trim(fields[col_pos.at(specs[s].name)]);
      if (cell.empty()) {
        data[s].push_back(std::nullopt);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw ParseError(path + ": row " + std::to_string(row) +
                         ", column \"" + specs[s].name +
                         "\": cannot parse \"" + cell + "\"");
      data[s].push_back(v);
    }
  }

  Dataset ds;
  for (std::size_t s = 0; s < specs.size(); ++s)
    ds.add_column(specs[s].name, std::move(data[s]));
  return ds;
}

namespace {

VariableSummary summarize_one(const std::string& name,
                              const std::vector<std::optional<double>>& col,
                              double c_min, double c_max) {
  VariableSummary out;
  out.variable = name;
  double sum = 0, min = 0, max = 0;
  std::size_t n = 0;
  for (const auto& v : col) {
    if (!v) continue;
    if (n == 0) {
      min = max = *v;
    } else {
      min = std::min(min, *v);
      max = std::max(max, *v);
    }
    sum += *v;
    ++n;
  }
  out.n = n;
  if (n == 0) {
    out.empty = true;
    return out;
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0;
  for (const auto& v : col)
    if (v) ss += (*v - mean) * (*v - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  out.raw_min = min;
  out.raw_max = max;
  out.raw_mean = mean;
  out.raw_sd = sd;
  out.ps_min = percentize(min, c_min, c_max);
  out.ps_max = percentize(max, c_min, c_max);
  out.ps_mean = percentize(mean, c_min, c_max);
  out.ps_sd = sd / (c_max - c_min);
  return out;
}

}  // namespace

DescriptiveSummary describe(const Dataset& ds,
                            const std::vector<VariableSpec>& specs) {
  DescriptiveSummary out;
  for (const auto& spec : specs)
    out.rows.push_back(summarize_one(spec.name, ds.column(spec.name),
                                     spec.conceptual_min,
                                     spec.conceptual_max));
  return out;
}

Dataset complete_cases(const Dataset& ds,
                       const std::vector<std::string>& vars) {
  std::vector<bool> keep(ds.n_raw(), true);
  for (const auto& name : vars) {
    const auto& col = ds.column(name);
    for (std::size_t i = 0; i < col.size(); ++i)
      if (!col[i]) keep[i] = false;
  }
  Dataset out;
  for (const auto& name : ds.names()) {
    const auto& col = ds.column(name);
    std::vector<std::optional<double>> kept;
    for (std::size_t i = 0; i < col.size(); ++i)
      if (keep[i]) kept.push_back(col[i]);
    out.add_column(name, std::move(kept));
  }
  return out;
}

Dataset percentized(const Dataset& ds,
                    const std::vector<VariableSpec>& specs) {
  std::unordered_map<std::string, const VariableSpec*> by_name;
  for (const auto& spec : specs) by_name.emplace(spec.name, &spec);
  Dataset out;
  for (const auto& name : ds.names()) {
    const auto& col = ds.column(name);
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      out.add_column(name, col);
      continue;
    }
    std::vector<std::optional<double>> mapped;
    mapped.reserve(col.size());
    for (const auto& v : col)
      mapped.push_back(v ? std::optional<double>(percentize(
                               *v, it->second->conceptual_min,
                               it->second->conceptual_max))
                         : std::nullopt);
    out.add_column(name, std::move(mapped));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string summary_to_csv(const DescriptiveSummary& summary) {
  std::string out =
      "variable,n,raw_min,raw_max,raw_mean,raw_sd,ps_min,ps_max,ps_mean,ps_sd\n";
  for (const auto& r : summary.rows) {
    out += r.variable + "," + std::to_string(r.n);
    if (r.empty) {
      out += ",,,,,,,,\n";
      continue;
    }
    out += "," + fmt(r.raw_min) + "," + fmt(r.raw_max) + "," + fmt(r.raw_mean) +
           "," + fmt(r.raw_sd) + "," + fmt(r.ps_min) + "," + fmt(r.ps_max) +
           "," + fmt(r.ps_mean) + "," + fmt(r.ps_sd) + "\n";
  }
  return out;
}

std::string summary_to_json(const DescriptiveSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : summary.rows) {
    nlohmann::json row;
    row["variable"] = r.variable;
    row["n"] = r.n;
    if (!r.empty) {
      row["raw_min"] = r.raw_min;
      row["raw_max"] = r.raw_max;
      row["raw_mean"] = r.raw_mean;
      row["raw_sd"] = r.raw_sd;
      row["ps_min"] = r.ps_min;
      row["ps_max"] = r.ps_max;
      row["ps_mean"] = r.ps_mean;
      row["ps_sd"] = r.ps_sd;
    } else {
      row["empty"] = true;
    }
    rows.push_back(row);
  }
  return nlohmann::json{{"variables", rows}}.dump(2);
}

}  // namespace medgeo
