// medgeo: mediation analysis, rejection-region geometry, and the Monte Carlo
// study around the total-effect test.
//
// Subcommands: describe, fit, classify, reduce, geometry, simulate.
// Exit codes: 0 success, 1 usage error, 2 data/model error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "medgeo/dataset.hpp"
#include "medgeo/errors.hpp"
#include "medgeo/estimation.hpp"
#include "medgeo/geometry.hpp"
#include "medgeo/reduction.hpp"
#include "medgeo/serialization.hpp"
#include "medgeo/simulation.hpp"
#include "medgeo/typology.hpp"

namespace {

using nlohmann::json;

struct VariableOptions {
  std::string data_path;
  std::string y, m, x;
  std::vector<std::string> controls;
  std::vector<std::string> ranges;  // name=min:max
  std::string spec_path;            // JSON file with a variables array
  bool percentize = false;
};

void add_model_options(CLI::App* cmd, VariableOptions& opts,
                       bool require_model) {
  cmd->add_option("--data", opts.data_path, "input CSV file")->required();
  auto* y = cmd->add_option("--y", opts.y, "outcome variable");
  auto* m = cmd->add_option("--m", opts.m, "mediator variable");
  auto* x = cmd->add_option("--x", opts.x, "treatment variable");
  if (require_model) {
    y->required();
    m->required();
    x->required();
  }
  cmd->add_option("--controls", opts.controls,
                  "control variables (repeat or comma separated)")
      ->delimiter(',');
  cmd->add_option("--range", opts.ranges,
                  "conceptual range NAME=MIN:MAX (repeatable)");
  cmd->add_option("--spec", opts.spec_path,
                  "JSON model spec file with a \"variables\" array");
  cmd->add_flag("--percentize", opts.percentize,
                "map declared variables to the 0-1 scale before fitting");
}

std::pair<std::string, std::pair<double, double>> parse_range(
    const std::string& text) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos)
    throw medgeo::ParseError("bad --range, expected NAME=MIN:MAX: " + text);
  const std::string name = text.substr(0, eq);
  const double lo = std::stod(text.substr(eq + 1, colon - eq - 1));
  const double hi = std::stod(text.substr(colon + 1));
  return {name, {lo, hi}};
}

// Builds the variable specs from --spec and/or --y/--m/--x/--controls/--range.
std::vector<medgeo::VariableSpec> build_specs(const VariableOptions& opts,
                                              medgeo::ModelSpec* model) {
  std::vector<medgeo::VariableSpec> specs;
  auto find = [&](const std::string& name) -> medgeo::VariableSpec* {
    for (auto& s : specs)
      if (s.name == name) return &s;
    return nullptr;
  };

  if (!opts.spec_path.empty()) {
    std::ifstream in(opts.spec_path);
    if (!in) throw medgeo::IoError("cannot open " + opts.spec_path);
    json j = json::parse(in);
    for (const auto& v : j.at("variables")) {
      medgeo::VariableSpec s;
      s.name = v.at("name").get<std::string>();
      s.role = medgeo::var_role_from_string(v.value("role", "control"));
      s.conceptual_min = v.value("min", 0.0);
      s.conceptual_max = v.value("max", 1.0);
      specs.push_back(s);
    }
  }

  auto ensure = [&](const std::string& name, medgeo::VarRole role) {
    if (name.empty()) return;
    if (auto* s = find(name)) {
      s->role = role;
    } else {
      medgeo::VariableSpec fresh;
      fresh.name = name;
      fresh.role = role;
      specs.push_back(fresh);
    }
  };
  ensure(opts.y, medgeo::VarRole::outcome);
  ensure(opts.m, medgeo::VarRole::mediator);
  ensure(opts.x, medgeo::VarRole::treatment);
  for (const auto& c : opts.controls) ensure(c, medgeo::VarRole::control);

  for (const auto& r : opts.ranges) {
    const auto [name, range] = parse_range(r);
    if (auto* s = find(name)) {
      s->conceptual_min = range.first;
      s->conceptual_max = range.second;
    } else {
      medgeo::VariableSpec fresh;
      fresh.name = name;
      fresh.conceptual_min = range.first;
      fresh.conceptual_max = range.second;
      specs.push_back(fresh);
    }
  }

  if (model) {
    auto assign_once = [](std::string& slot, const std::string& name,
                          const char* role) {
      if (!slot.empty() && slot != name)
        throw medgeo::DomainError(std::string("two variables declared as ") +
                                  role + ": " + slot + " and " + name);
      slot = name;
    };
    for (const auto& s : specs) {
      switch (s.role) {
        case medgeo::VarRole::outcome:
          assign_once(model->outcome, s.name, "outcome");
          break;
        case medgeo::VarRole::mediator:
          assign_once(model->mediator, s.name, "mediator");
          break;
        case medgeo::VarRole::treatment:
          assign_once(model->treatment, s.name, "treatment");
          break;
        case medgeo::VarRole::control:
          model->controls.push_back(s.name);
          break;
      }
    }
    if (model->outcome.empty() || model->mediator.empty() ||
        model->treatment.empty())
      throw medgeo::DomainError(
          "model needs outcome, mediator and treatment variables (--y/--m/--x "
          "or roles in --spec)");
  }
  return specs;
}

medgeo::Dataset load_for_model(const VariableOptions& opts,
                               const std::vector<medgeo::VariableSpec>& specs) {
  medgeo::Dataset ds = medgeo::load_csv(opts.data_path, specs);
  if (opts.percentize) ds = medgeo::percentized(ds, specs);
  return ds;
}

void write_or_print(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw medgeo::IoError("cannot write " + out_path);
  out << body;
}

std::string human_summary_table(const medgeo::DescriptiveSummary& summary) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-12s %7s %9s %9s %9s %9s %9s %9s\n",
                "variable", "n", "raw_mean", "raw_sd", "ps_min", "ps_max",
                "ps_mean", "ps_sd");
  out += buf;
  for (const auto& r : summary.rows) {
    if (r.empty) {
      std::snprintf(buf, sizeof(buf), "%-12s %7zu %s\n", r.variable.c_str(),
                    r.n, "(no non-missing values)");
      out += buf;
      continue;
    }
    std::snprintf(buf, sizeof(buf),
                  "%-12s %7zu %9.4g %9.4g %9.4g %9.4g %9.4g %9.4g\n",
                  r.variable.c_str(), r.n, r.raw_mean, r.raw_sd, r.ps_min,
                  r.ps_max, r.ps_mean, r.ps_sd);
    out += buf;
  }
  return out;
}

std::string human_fit_table(const medgeo::MediationFit& fit) {
  char buf[512];
  std::string out;
  out += "framework: " + medgeo::to_string(fit.framework) +
         "   n = " + std::to_string(fit.n_used) + "\n";
  out += "path          estimate          se           stat        p-value\n";
  auto row = [&](const char* name, double est, double se, double stat,
                 double p) {
    std::snprintf(buf, sizeof(buf), "%-8s %12.6g %12.6g %12.6g %12.4g\n", name,
                  est, se, stat, p);
    out += buf;
  };
  row("a", fit.a_hat, fit.se_a, fit.t_a, fit.p_a);
  row("b", fit.b_hat, fit.se_b, fit.t_b, fit.p_b);
  row("d", fit.d_hat, fit.se_d, fit.t_d, fit.p_d);
  row("c", fit.c_hat, fit.se_c, fit.t_c, fit.p_c);
  if (!std::isnan(fit.sobel_S)) {
    std::snprintf(buf, sizeof(buf), "%-8s %12.6g %12s %12.6g %12.4g\n", "ab",
                  fit.a_hat * fit.b_hat, "", fit.sobel_S, fit.p_ab);
    out += buf;
  }
  return out;
}

std::string human_verdict(const medgeo::TypologyVerdict& v) {
  std::string out;
  out += "PAPA type:          " + medgeo::to_string(v.papa_type) + "\n";
  if (v.papa_type == medgeo::PapaType::indirect_only)
    out += "directional subtype: " + medgeo::to_string(v.directional_subtype) +
           "\n";
  out += "causal-steps type:  " + medgeo::to_string(v.causal_steps_type) + "\n";
  out += "erroneous rejection by total-effect gate: ";
  out += v.erroneous_rejection ? "yes" : "no";
  out += "\n";
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{
      "mediation analysis, rejection-region geometry and Monte Carlo "
      "study tools"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON on stdout");

  // describe
  auto* describe = app.add_subcommand(
      "describe", "descriptive statistics on raw and 0-1 scales");
  VariableOptions d_opts;
  add_model_options(describe, d_opts, false);
  std::string d_format = "table";
  std::string d_out;
  describe->add_option("--format", d_format, "table|csv|json");
  describe->add_option("--out", d_out, "output file (stdout if omitted)");

  // fit
  auto* fit_cmd =
      app.add_subcommand("fit", "fit the three mediation regressions");
  VariableOptions f_opts;
  add_model_options(fit_cmd, f_opts, true);
  double f_alpha = 0.05;
  std::string f_framework = "LSE-F";
  fit_cmd->add_option("--alpha", f_alpha, "significance level");
  fit_cmd->add_option("--framework", f_framework, "LSE-F|LSE-Sobel|LAD-Z");

  // classify
  auto* classify_cmd = app.add_subcommand(
      "classify", "mediation typology and percent contributions");
  VariableOptions c_opts;
  std::string c_fit_json;
  double c_alpha = 0.05;
  std::string c_framework = "LSE-F";
  classify_cmd->add_option("--fit-json", c_fit_json,
                           "precomputed statistics JSON (skips fitting)");
  classify_cmd->add_option("--data", c_opts.data_path, "input CSV file");
  classify_cmd->add_option("--y", c_opts.y, "outcome variable");
  classify_cmd->add_option("--m", c_opts.m, "mediator variable");
  classify_cmd->add_option("--x", c_opts.x, "treatment variable");
  classify_cmd->add_option("--controls", c_opts.controls, "control variables")
      ->delimiter(',');
  classify_cmd->add_option("--range", c_opts.ranges,
                           "conceptual range NAME=MIN:MAX");
  classify_cmd->add_option("--spec", c_opts.spec_path, "JSON model spec file");
  classify_cmd->add_flag("--percentize", c_opts.percentize,
                         "map variables to the 0-1 scale before fitting");
  classify_cmd->add_option("--alpha", c_alpha, "significance level");
  classify_cmd->add_option("--framework", c_framework,
                           "LSE-F|LSE-Sobel|LAD-Z");

  // reduce
  auto* reduce_cmd = app.add_subcommand(
      "reduce", "canonical coordinates of the no-controls model");
  VariableOptions r_opts;
  add_model_options(reduce_cmd, r_opts, true);

  // geometry
  auto* geometry_cmd =
      app.add_subcommand("geometry", "rejection-region geometry tools");
  geometry_cmd->require_subcommand(1);

  auto* witness_cmd = geometry_cmd->add_subcommand(
      "witness", "find a point the total-effect gate classifies wrongly");
  std::int64_t w_n = 50;
  double w_alpha = 0.05;
  std::string w_kind = "indirect-only";
  std::string w_subtype = "d-plementary";
  int w_sign_abc = 1;
  witness_cmd->add_option("--n", w_n, "sample size")->required();
  witness_cmd->add_option("--alpha", w_alpha, "significance level")->required();
  witness_cmd->add_option("--kind", w_kind,
                          "indirect-only|competitive|sobel-io");
  witness_cmd->add_option("--subtype", w_subtype,
                          "d-plementary|d-petitive (indirect-only)");
  witness_cmd->add_option("--sign-abc", w_sign_abc,
                          "+1 or -1 (competitive)");

  auto* scan_cmd = geometry_cmd->add_subcommand(
      "scan", "grid scan showing the gate adds nothing for complementary "
              "mediation");
  std::int64_t s_n = 50;
  double s_alpha = 0.05;
  int s_density = 500;
  scan_cmd->add_option("--n", s_n, "sample size")->required();
  scan_cmd->add_option("--alpha", s_alpha, "significance level")->required();
  scan_cmd->add_option("--density", s_density, "grid density per axis");

  auto* boundary_cmd = geometry_cmd->add_subcommand(
      "boundary", "region boundary polylines for plotting");
  std::int64_t b_n = 50;
  double b_alpha = 0.05;
  double b_r = 1.0;
  double b_pmax = 5.0;
  int b_count = 200;
  std::string b_format = "json";
  std::string b_out;
  boundary_cmd->add_option("--n", b_n, "sample size")->required();
  boundary_cmd->add_option("--alpha", b_alpha, "significance level")
      ->required();
  boundary_cmd->add_option("--r", b_r, "fixed r coordinate")->required();
  boundary_cmd->add_option("--p-max", b_pmax, "sample p in [0, p_max]");
  boundary_cmd->add_option("--count", b_count, "samples per polyline");
  boundary_cmd->add_option("--format", b_format, "json|csv");
  boundary_cmd->add_option("--out", b_out, "output file (stdout if omitted)");

  // simulate
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo study over random models");
  std::string sim_config_path;
  std::string sim_out = "results";
  std::vector<std::string> sim_formats{"csv", "json"};
  std::optional<std::int64_t> sim_replicates;
  std::optional<std::uint64_t> sim_seed;
  std::optional<int> sim_threads;
  simulate_cmd->add_option("--config", sim_config_path,
                           "config file (JSON or key=value lines)");
  simulate_cmd->add_option("--out", sim_out, "output directory");
  simulate_cmd->add_option("--format", sim_formats, "csv and/or json")
      ->delimiter(',');
  simulate_cmd->add_option("--replicates", sim_replicates,
                           "override replicate count");
  simulate_cmd->add_option("--seed", sim_seed, "override seed");
  simulate_cmd->add_option("--threads", sim_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message / help text
    return code == 0 ? 0 : 1;     // usage errors exit 1
  }

  if (describe->parsed()) {
    const auto specs = build_specs(d_opts, nullptr);
    if (specs.empty())
      throw medgeo::DomainError("describe: no variables declared");
    const auto ds = medgeo::load_csv(d_opts.data_path, specs);
    const auto summary = medgeo::describe(ds, specs);
    if (as_json || d_format == "json") {
      write_or_print(medgeo::summary_to_json(summary), d_out);
    } else if (d_format == "csv") {
      write_or_print(medgeo::summary_to_csv(summary), d_out);
    } else {
      write_or_print(human_summary_table(summary), d_out);
    }
    return 0;
  }

  if (fit_cmd->parsed()) {
    medgeo::ModelSpec model;
    model.alpha = f_alpha;
    const auto specs = build_specs(f_opts, &model);
    const auto ds = load_for_model(f_opts, specs);
    const auto fw = medgeo::framework_from_string(f_framework);
    medgeo::MediationFit fit = fw == medgeo::Framework::lad_z
                                   ? medgeo::fit_lad(ds, model)
                                   : medgeo::fit_lse(ds, model);
    fit.framework = fw;
    const auto verdict = medgeo::classify(fit, f_alpha);
    if (as_json) {
      json out = medgeo::to_json(fit);
      out["verdict"] = medgeo::to_json(verdict);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << human_fit_table(fit) << "\n" << human_verdict(verdict);
    }
    return 0;
  }

  if (classify_cmd->parsed()) {
    medgeo::MediationFit fit;
    const auto fw = medgeo::framework_from_string(c_framework);
    if (!c_fit_json.empty()) {
      std::ifstream in(c_fit_json);
      if (!in) throw medgeo::IoError("cannot open " + c_fit_json);
      fit = medgeo::fit_from_json(json::parse(in));
      if (!in.good() && !in.eof())
        throw medgeo::IoError("read failed for " + c_fit_json);
    } else {
      if (c_opts.data_path.empty())
        throw medgeo::DomainError("classify: need --data or --fit-json");
      medgeo::ModelSpec model;
      model.alpha = c_alpha;
      const auto specs = build_specs(c_opts, &model);
      const auto ds = load_for_model(c_opts, specs);
      fit = fw == medgeo::Framework::lad_z ? medgeo::fit_lad(ds, model)
                                           : medgeo::fit_lse(ds, model);
    }
    fit.framework = fw;
    const auto verdict = medgeo::classify(fit, c_alpha);
    const auto contributions = medgeo::percent_contributions(fit);
    if (as_json) {
      json out;
      out["verdict"] = medgeo::to_json(verdict);
      out["contributions"] = medgeo::to_json(contributions);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << human_verdict(verdict);
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "c_p(ab) = %.4g%%   c_p(d) = %.4g%%   c_p(c) = %+g\n",
                    contributions.cp_ab * 100.0, contributions.cp_d * 100.0,
                    contributions.cp_c);
      std::cout << buf;
    }
    return 0;
  }

  if (reduce_cmd->parsed()) {
    medgeo::ModelSpec model;
    const auto specs = build_specs(r_opts, &model);
    const auto ds = load_for_model(r_opts, specs);
    const auto cc = medgeo::canonical_reduce(ds, model);
    const auto pt = medgeo::geometry_point(cc);
    json out;
    out["canonical_coords"] = medgeo::to_json(cc);
    out["geometry_point"] = medgeo::to_json(pt);
    const auto est = medgeo::coords_to_estimates(cc);
    out["estimates"] = {{"a", est.a}, {"b", est.b}, {"c", est.c}, {"d", est.d}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (witness_cmd->parsed()) {
    medgeo::GeometryPoint pt;
    if (w_kind == "indirect-only") {
      pt = medgeo::witness_indirect_only(
          w_n, w_alpha, medgeo::indirect_subtype_from_string(w_subtype));
    } else if (w_kind == "competitive") {
      pt = medgeo::witness_competitive(w_n, w_alpha, w_sign_abc);
    } else if (w_kind == "sobel-io") {
      pt = medgeo::witness_sobel_io(w_n, w_alpha);
    } else {
      throw medgeo::DomainError("unknown witness kind: " + w_kind);
    }
    json out = medgeo::to_json(pt);
    const auto cv = medgeo::critical_values(w_n, w_alpha);
    out["critical_values"] = medgeo::to_json(cv);
    json memb;
    for (const auto region :
         {medgeo::Region::ra, medgeo::Region::rb, medgeo::Region::rc,
          medgeo::Region::rd, medgeo::Region::rab_sobel})
      memb[medgeo::to_string(region)] = medgeo::in_region(pt, region, cv);
    out["memberships"] = memb;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (scan_cmd->parsed()) {
    const auto report =
        medgeo::verify_complementary_superfluous(s_n, s_alpha, s_density);
    std::cout << medgeo::to_json(report).dump(2) << "\n";
    return report.violations == 0 ? 0 : 2;
  }

  if (boundary_cmd->parsed()) {
    const auto polylines =
        medgeo::region_boundary_samples(b_n, b_alpha, b_r, b_pmax, b_count);
    if (b_format == "csv") {
      std::string body = "boundary,p,q\n";
      char buf[128];
      for (const auto& poly : polylines)
        for (const auto& pq : poly.points) {
          std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n",
                        poly.name.c_str(), pq[0], pq[1]);
          body += buf;
        }
      write_or_print(body, b_out);
    } else {
      write_or_print(medgeo::to_json(polylines).dump(2), b_out);
    }
    return 0;
  }

  if (simulate_cmd->parsed()) {
    medgeo::SimulationConfig config;
    if (!sim_config_path.empty()) {
      std::ifstream in(sim_config_path);
      if (!in) throw medgeo::IoError("cannot open " + sim_config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      config = medgeo::parse_simulation_config(ss.str());
    }
    if (sim_replicates) config.replicates = *sim_replicates;  // flags win
    if (sim_seed) config.seed = *sim_seed;
    if (sim_threads) config.threads = *sim_threads;

    std::cerr << "simulate: " << config.replicates << " replicates, seed "
              << config.seed << ", " << config.threads << " thread(s)\n";
    const auto report = medgeo::run_study(config);
    std::cerr << "simulate: done, " << report.regenerated
              << " degenerate draw(s) regenerated\n";
    for (const auto& f : sim_formats) {
      if (f == "csv")
        medgeo::export_report(report, sim_out, medgeo::ReportFormat::csv);
      else if (f == "json")
        medgeo::export_report(report, sim_out, medgeo::ReportFormat::json);
      else
        throw medgeo::DomainError("unknown format: " + f);
    }
    if (as_json) {
      json out;
      out["output_dir"] = sim_out;
      out["replicates"] = config.replicates;
      out["regenerated"] = report.regenerated;
      std::cout << out.dump(2) << "\n";
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const medgeo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
