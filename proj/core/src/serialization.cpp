#include "medgeo/serialization.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "medgeo/errors.hpp"

namespace medgeo {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& cell, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw ParseError(where + ": cannot parse \"" + cell + "\"");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

// JSON has no NaN literal; nlohmann emits null. Map both directions.
json num_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double num_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

nlohmann::json to_json(const MediationFit& fit) {
  json j;
  j["framework"] = to_string(fit.framework);
  j["n_used"] = fit.n_used;
  j["n_controls"] = fit.n_controls;
  j["estimates"] = {{"a", fit.a_hat},        {"b", fit.b_hat},
                    {"d", fit.d_hat},        {"c", fit.c_hat},
                    {"i_M", fit.i_M_hat},    {"i_Y", fit.i_Y_hat},
                    {"i_Y_star", fit.i_Ystar_hat}};
  j["se"] = {{"a", fit.se_a}, {"b", fit.se_b}, {"d", fit.se_d},
             {"c", fit.se_c}};
  j["statistics"] = {{"t_a", fit.t_a},     {"t_b", fit.t_b},
                     {"t_d", fit.t_d},     {"t_c", fit.t_c},
                     {"F_a", fit.F_a},     {"F_b", fit.F_b},
                     {"F_d", fit.F_d},     {"F_c", fit.F_c},
                     {"sobel_S", num_or_null(fit.sobel_S)}};
  j["p_values"] = {{"a", fit.p_a},
                   {"b", fit.p_b},
                   {"d", fit.p_d},
                   {"c", fit.p_c},
                   {"ab", num_or_null(fit.p_ab)}};
  return j;
}

nlohmann::json to_json(const TypologyVerdict& v) {
  return json{{"papa_type", to_string(v.papa_type)},
              {"directional_subtype", to_string(v.directional_subtype)},
              {"causal_steps_type", to_string(v.causal_steps_type)},
              {"erroneous_rejection", v.erroneous_rejection},
              {"d_significant", v.d_significant},
              {"framework", to_string(v.framework)},
              {"alpha", v.alpha}};
}

nlohmann::json to_json(const ContributionReport& r) {
  return json{{"b_p", {{"a", r.bp_a},
                       {"b", r.bp_b},
                       {"ab", r.bp_ab},
                       {"d", r.bp_d},
                       {"c", r.bp_c}}},
              {"c_p", {{"c", r.cp_c},
                       {"ab", r.cp_ab},
                       {"d", r.cp_d},
                       {"a", r.cp_a},
                       {"b", r.cp_b}}}};
}

nlohmann::json to_json(const CanonicalCoords& cc) {
  return json{{"n", cc.n},   {"x1", cc.x1}, {"x2", cc.x2}, {"m1", cc.m1},
              {"m2", cc.m2}, {"m3", cc.m3}, {"y1", cc.y1}, {"y2", cc.y2},
              {"y3", cc.y3}, {"y4", cc.y4}};
}

nlohmann::json to_json(const GeometryPoint& pt) {
  return json{{"r", pt.r},
              {"p", pt.p},
              {"q", pt.q},
              {"n", pt.n},
              {"sign_abd", pt.sign_abd},
              {"sign_abc", pt.sign_abc}};
}

nlohmann::json to_json(const CriticalValues& cv) {
  return json{{"n", cv.n},
              {"alpha", cv.alpha},
              {"r_crit", cv.r_crit},
              {"p_crit", cv.p_crit},
              {"z_half", cv.z_half}};
}

nlohmann::json to_json(const SuperfluityReport& r) {
  return json{{"n", r.n},
              {"alpha", r.alpha},
              {"grid_density", r.grid_density},
              {"r_range", {r.r_lo, r.r_hi}},
              {"p_range", {r.p_lo, r.p_hi}},
              {"points_checked", r.points_checked},
              {"violations", r.violations}};
}

nlohmann::json to_json(const std::vector<BoundaryPolyline>& polylines) {
  json arr = json::array();
  for (const auto& poly : polylines) {
    json pts = json::array();
    for (const auto& pq : poly.points) pts.push_back({pq[0], pq[1]});
    arr.push_back(json{{"name", poly.name}, {"points", pts}});
  }
  return arr;
}

nlohmann::json to_json(const SimulationConfig& c) {
  json fws = json::array();
  for (const auto fw : c.frameworks) fws.push_back(to_string(fw));
  return json{{"replicates", c.replicates},
              {"n_min", c.n_min},
              {"n_max", c.n_max},
              {"param_min", c.param_min},
              {"param_max", c.param_max},
              {"seed", c.seed},
              {"frameworks", fws},
              {"alpha_grid_size", c.alpha_grid_size},
              {"alpha_lo", c.alpha_lo},
              {"alpha_hi", c.alpha_hi},
              {"threads", c.threads}};
}

namespace {

json record_to_json(const ReplicateRecord& rec) {
  auto pv = [](const FrameworkPvalues& p) {
    return json{{"p_a", p.p_a},
                {"p_b", p.p_b},
                {"p_d", p.p_d},
                {"p_c", p.p_c},
                {"p_ab", num_or_null(p.p_ab)},
                {"sign_abd", p.sign_abd},
                {"sign_abc", p.sign_abc}};
  };
  return json{{"index", rec.index},
              {"n", rec.n},
              {"attempts", rec.attempts},
              {"params",
               {{"i_m", rec.params.i_m},
                {"i_y", rec.params.i_y},
                {"a", rec.params.a},
                {"b", rec.params.b},
                {"d", rec.params.d},
                {"sigma2_m", rec.params.sigma2_m},
                {"sigma2_y", rec.params.sigma2_y}}},
              {"lse", pv(rec.lse)},
              {"lad", pv(rec.lad)}};
}

ReplicateRecord record_from_json(const json& j) {
  ReplicateRecord rec;
  rec.index = j.at("index").get<std::int64_t>();
  rec.n = j.at("n").get<int>();
  rec.attempts = j.at("attempts").get<int>();
  const auto& p = j.at("params");
  rec.params.i_m = p.at("i_m").get<double>();
  rec.params.i_y = p.at("i_y").get<double>();
  rec.params.a = p.at("a").get<double>();
  rec.params.b = p.at("b").get<double>();
  rec.params.d = p.at("d").get<double>();
  rec.params.sigma2_m = p.at("sigma2_m").get<double>();
  rec.params.sigma2_y = p.at("sigma2_y").get<double>();
  auto pv = [](const json& pj) {
    FrameworkPvalues out;
    out.p_a = pj.at("p_a").get<double>();
    out.p_b = pj.at("p_b").get<double>();
    out.p_d = pj.at("p_d").get<double>();
    out.p_c = pj.at("p_c").get<double>();
    out.p_ab = num_from(pj.at("p_ab"));
    out.sign_abd = pj.at("sign_abd").get<int>();
    out.sign_abc = pj.at("sign_abc").get<int>();
    return out;
  };
  rec.lse = pv(j.at("lse"));
  rec.lad = pv(j.at("lad"));
  return rec;
}

json curve_to_json(const ConditionCurve& c) {
  json prop = json::array();
  for (const double v : c.proportion) prop.push_back(num_or_null(v));
  return json{{"framework", to_string(c.framework)},
              {"condition", to_string(c.condition)},
              {"alpha", c.alpha},
              {"numerator", c.numerator},
              {"denominator", c.denominator},
              {"proportion", prop}};
}

Condition condition_from_name(const std::string& s) {
  if (s == "indirect_only") return Condition::io_all;
  if (s == "indirect_only_d_plementary") return Condition::io_dplementary;
  if (s == "indirect_only_d_petitive") return Condition::io_dpetitive;
  if (s == "competitive") return Condition::competitive;
  throw ParseError("unknown condition: " + s);
}

ConditionCurve curve_from_json(const json& j) {
  ConditionCurve c;
  c.framework = framework_from_string(j.at("framework").get<std::string>());
  c.condition = condition_from_name(j.at("condition").get<std::string>());
  c.alpha = j.at("alpha").get<std::vector<double>>();
  c.numerator = j.at("numerator").get<std::vector<std::int64_t>>();
  c.denominator = j.at("denominator").get<std::vector<std::int64_t>>();
  for (const auto& v : j.at("proportion")) c.proportion.push_back(num_from(v));
  return c;
}

}  // namespace

nlohmann::json to_json(const SimulationReport& report) {
  json records = json::array();
  for (const auto& rec : report.records) records.push_back(record_to_json(rec));
  json curves = json::array();
  for (const auto& c : report.curves) curves.push_back(curve_to_json(c));
  return json{{"schema_version", report.schema_version},
              {"config", to_json(report.config)},
              {"records", records},
              {"curves", curves},
              {"regenerated", report.regenerated}};
}

MediationFit fit_from_json(const nlohmann::json& j) {
  MediationFit fit;
  if (j.contains("framework"))
    fit.framework = framework_from_string(j.at("framework").get<std::string>());
  const auto& est = j.at("estimates");
  fit.a_hat = est.at("a").get<double>();
  fit.b_hat = est.at("b").get<double>();
  fit.d_hat = est.at("d").get<double>();
  fit.c_hat = est.at("c").get<double>();
  const auto& p = j.at("p_values");
  fit.p_a = p.at("a").get<double>();
  fit.p_b = p.at("b").get<double>();
  fit.p_d = p.at("d").get<double>();
  fit.p_c = p.at("c").get<double>();
  fit.p_ab = p.contains("ab") ? num_from(p.at("ab"))
                              : std::numeric_limits<double>::quiet_NaN();
  if (j.contains("se")) {
    const auto& se = j.at("se");
    fit.se_a = se.value("a", 0.0);
    fit.se_b = se.value("b", 0.0);
    fit.se_d = se.value("d", 0.0);
    fit.se_c = se.value("c", 0.0);
  }
  fit.n_used = j.value("n_used", std::int64_t{0});
  return fit;
}

SimulationConfig config_from_json(const nlohmann::json& j) {
  SimulationConfig c;
  c.replicates = j.value("replicates", c.replicates);
  c.n_min = j.value("n_min", c.n_min);
  c.n_max = j.value("n_max", c.n_max);
  c.param_min = j.value("param_min", c.param_min);
  c.param_max = j.value("param_max", c.param_max);
  c.seed = j.value("seed", c.seed);
  c.alpha_grid_size = j.value("alpha_grid_size", c.alpha_grid_size);
  c.alpha_lo = j.value("alpha_lo", c.alpha_lo);
  c.alpha_hi = j.value("alpha_hi", c.alpha_hi);
  c.threads = j.value("threads", c.threads);
  if (j.contains("frameworks")) {
    c.frameworks.clear();
    for (const auto& f : j.at("frameworks"))
      c.frameworks.push_back(framework_from_string(f.get<std::string>()));
  }
  return c;
}

SimulationConfig parse_simulation_config(const std::string& text) {
  for (const char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return config_from_json(json::parse(text));
    break;
  }
  // key = value lines; '#' starts a comment.
  json j = json::object();
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "frameworks") {
      json arr = json::array();
      for (const auto& f : split(value, ','))
        if (!f.empty()) arr.push_back(f);
      j[key] = arr;
    } else if (key == "replicates" || key == "n_min" || key == "n_max" ||
               key == "alpha_grid_size" || key == "threads") {
      j[key] = std::stoll(value);
    } else if (key == "seed") {
      j[key] = std::stoull(value);
    } else {
      j[key] = parse_double(value, "config " + key);
    }
  }
  return config_from_json(j);
}

std::string curves_to_csv(const std::vector<ConditionCurve>& curves) {
  std::string out = "framework,condition,alpha,numerator,denominator,proportion\n";
  for (const auto& c : curves) {
    for (std::size_t g = 0; g < c.alpha.size(); ++g) {
      out += to_string(c.framework) + "," + to_string(c.condition) + "," +
             fmt(c.alpha[g]) + "," + std::to_string(c.numerator[g]) + "," +
             std::to_string(c.denominator[g]) + "," +
             fmt(c.proportion[g]) + "\n";
    }
  }
  return out;
}

std::string records_to_csv(const std::vector<ReplicateRecord>& records) {
  std::string out =
      "index,n,attempts,i_m,i_y,a,b,d,sigma2_m,sigma2_y,"
      "lse_p_a,lse_p_b,lse_p_d,lse_p_c,lse_p_ab,lse_sign_abd,lse_sign_abc,"
      "lad_p_a,lad_p_b,lad_p_d,lad_p_c,lad_sign_abd,lad_sign_abc\n";
  for (const auto& r : records) {
    out += std::to_string(r.index) + "," + std::to_string(r.n) + "," +
           std::to_string(r.attempts) + "," + fmt(r.params.i_m) + "," +
           fmt(r.params.i_y) + "," + fmt(r.params.a) + "," + fmt(r.params.b) +
           "," + fmt(r.params.d) + "," + fmt(r.params.sigma2_m) + "," +
           fmt(r.params.sigma2_y) + "," + fmt(r.lse.p_a) + "," +
           fmt(r.lse.p_b) + "," + fmt(r.lse.p_d) + "," + fmt(r.lse.p_c) + "," +
           fmt(r.lse.p_ab) + "," + std::to_string(r.lse.sign_abd) + "," +
           std::to_string(r.lse.sign_abc) + "," + fmt(r.lad.p_a) + "," +
           fmt(r.lad.p_b) + "," + fmt(r.lad.p_d) + "," + fmt(r.lad.p_c) + "," +
           std::to_string(r.lad.sign_abd) + "," +
           std::to_string(r.lad.sign_abc) + "\n";
  }
  return out;
}

void export_report(const SimulationReport& report, const std::string& dir,
                   ReportFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto write_file = [&](const std::string& name, const std::string& body) {
    const auto path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
    if (!out) throw IoError("write failed for " + path.string());
  };
  if (format == ReportFormat::json) {
    write_file("report.json", to_json(report).dump(2) + "\n");
  } else {
    write_file("curves.csv", curves_to_csv(report.curves));
    write_file("records.csv", records_to_csv(report.records));
  }
}

SimulationReport import_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j = json::parse(in);
  SimulationReport report;
  report.schema_version = j.at("schema_version").get<int>();
  report.config = config_from_json(j.at("config"));
  for (const auto& rec : j.at("records"))
    report.records.push_back(record_from_json(rec));
  for (const auto& c : j.at("curves"))
    report.curves.push_back(curve_from_json(c));
  report.regenerated = j.value("regenerated", std::int64_t{0});
  return report;
}

std::vector<ConditionCurve> import_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::vector<ConditionCurve> curves;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ParseError(path + ": bad curve row");
    const Framework fw = framework_from_string(f[0]);
    const Condition cond = condition_from_name(f[1]);
    if (curves.empty() || curves.back().framework != fw ||
        curves.back().condition != cond) {
      ConditionCurve c;
      c.framework = fw;
      c.condition = cond;
      curves.push_back(std::move(c));
    }
    auto& c = curves.back();
    c.alpha.push_back(parse_double(f[2], path));
    c.numerator.push_back(std::stoll(f[3]));
    c.denominator.push_back(std::stoll(f[4]));
    c.proportion.push_back(parse_double(f[5], path));
  }
  return curves;
}

std::vector<ReplicateRecord> import_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::vector<ReplicateRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 23) throw ParseError(path + ": bad record row");
    ReplicateRecord r;
    std::size_t i = 0;
    r.index = std::stoll(f[i++]);
    r.n = static_cast<int>(std::stoll(f[i++]));
    r.attempts = static_cast<int>(std::stoll(f[i++]));
    r.params.i_m = parse_double(f[i++], path);
    r.params.i_y = parse_double(f[i++], path);
    r.params.a = parse_double(f[i++], path);
    r.params.b = parse_double(f[i++], path);
    r.params.d = parse_double(f[i++], path);
    r.params.sigma2_m = parse_double(f[i++], path);
    r.params.sigma2_y = parse_double(f[i++], path);
    r.lse.p_a = parse_double(f[i++], path);
    r.lse.p_b = parse_double(f[i++], path);
    r.lse.p_d = parse_double(f[i++], path);
    r.lse.p_c = parse_double(f[i++], path);
    r.lse.p_ab = parse_double(f[i++], path);
    r.lse.sign_abd = static_cast<int>(std::stoll(f[i++]));
    r.lse.sign_abc = static_cast<int>(std::stoll(f[i++]));
    r.lad.p_a = parse_double(f[i++], path);
    r.lad.p_b = parse_double(f[i++], path);
    r.lad.p_d = parse_double(f[i++], path);
    r.lad.p_c = parse_double(f[i++], path);
    r.lad.sign_abd = static_cast<int>(std::stoll(f[i++]));
    r.lad.sign_abc = static_cast<int>(std::stoll(f[i++]));
    r.lad.p_ab = std::numeric_limits<double>::quiet_NaN();
    records.push_back(r);
  }
  return records;
}

}  // namespace medgeo
