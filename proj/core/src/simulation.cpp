#include "medgeo/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "medgeo/errors.hpp"

namespace medgeo {

Dataset Replicate::to_dataset() const {
  auto to_col = [](const Eigen::VectorXd& v) {
    std::vector<std::optional<double>> col(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      col[static_cast<std::size_t>(i)] = v(i);
    return col;
  };
  Dataset ds;
  ds.add_column("Y", to_col(y));
  ds.add_column("M", to_col(m));
  ds.add_column("X", to_col(x));
  return ds;
}

Replicate generate_replicate(RngStream& rng, const SimulationConfig& config) {
  Replicate rep;
  rep.n = static_cast<int>(rng.uniform_int(config.n_min, config.n_max));
  rep.params.i_m = rng.uniform_real(config.param_min, config.param_max);
  rep.params.i_y = rng.uniform_real(config.param_min, config.param_max);
  rep.params.a = rng.uniform_real(config.param_min, config.param_max);
  rep.params.b = rng.uniform_real(config.param_min, config.param_max);
  rep.params.d = rng.uniform_real(config.param_min, config.param_max);
  rep.params.sigma2_m = rng.inv_gamma_1_1();
  rep.params.sigma2_y = rng.inv_gamma_1_1();

  const double sd_m = std::sqrt(rep.params.sigma2_m);
  const double sd_y = std::sqrt(rep.params.sigma2_y);
  rep.x.resize(rep.n);
  rep.m.resize(rep.n);
  rep.y.resize(rep.n);
  for (int i = 0; i < rep.n; ++i) {
    const double x = rng.std_normal();
    const double m = rep.params.i_m + rep.params.a * x + sd_m * rng.std_normal();
    const double y = rep.params.i_y + rep.params.b * m + rep.params.d * x +
                     sd_y * rng.std_normal();
    rep.x(i) = x;
    rep.m(i) = m;
    rep.y(i) = y;
  }
  return rep;
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::io_all: return "indirect_only";
    case Condition::io_dplementary: return "indirect_only_d_plementary";
    case Condition::io_dpetitive: return "indirect_only_d_petitive";
    case Condition::competitive: return "competitive";
  }
  return "indirect_only";
}

std::string to_string_short(Condition c) {
  switch (c) {
    case Condition::io_all: return "io";
    case Condition::io_dplementary: return "io_dplem";
    case Condition::io_dpetitive: return "io_dpet";
    case Condition::competitive: return "comp";
  }
  return "io";
}

namespace {

const FrameworkPvalues& pvals_for(const ReplicateRecord& rec, Framework fw) {
  return fw == Framework::lad_z ? rec.lad : rec.lse;
}

}  // namespace

bool condition_holds(const ReplicateRecord& rec, Framework fw, Condition cond,
                     double alpha) {
  const FrameworkPvalues& pv = pvals_for(rec, fw);
  const bool ab_sig = fw == Framework::lse_sobel
                          ? pv.p_ab < alpha
                          : (pv.p_a < alpha && pv.p_b < alpha);
  switch (cond) {
    case Condition::io_all:
      return ab_sig && pv.p_d >= alpha;
    case Condition::io_dplementary:
      return ab_sig && pv.p_d >= alpha && pv.sign_abd > 0;
    case Condition::io_dpetitive:
      return ab_sig && pv.p_d >= alpha && pv.sign_abd < 0;
    case Condition::competitive:
      return ab_sig && pv.p_d < alpha && pv.sign_abd < 0;
  }
  return false;
}

double total_effect_pvalue(const ReplicateRecord& rec, Framework fw) {
  return pvals_for(rec, fw).p_c;
}

std::vector<double> alpha_grid(int size, double lo, double hi) {
  if (size < 1) throw DomainError("alpha_grid: size must be >= 1");
  if (!(lo > 0.0 && hi < 1.0 && lo < hi))
    throw DomainError("alpha_grid: grid must lie inside (0,1)");
  std::vector<double> grid(static_cast<std::size_t>(size));
  if (size == 1) {
    grid[0] = 0.5 * (lo + hi);
    return grid;
  }
  for (int i = 0; i < size; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (size - 1);
  return grid;
}

namespace {

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

FrameworkPvalues pack(const MediationFit& fit) {
  FrameworkPvalues pv;
  pv.p_a = fit.p_a;
  pv.p_b = fit.p_b;
  pv.p_d = fit.p_d;
  pv.p_c = fit.p_c;
  pv.p_ab = fit.p_ab;
  pv.sign_abd = sign_of(fit.a_hat * fit.b_hat * fit.d_hat);
  pv.sign_abc = sign_of(fit.a_hat * fit.b_hat * fit.c_hat);
  return pv;
}

// Sub-stream key: replicate index in the high bits, regeneration attempt in
// the low bits, so regenerated draws never collide with other replicates.
std::uint64_t stream_key(std::int64_t index, int attempt) {
  return (static_cast<std::uint64_t>(index) << 16) |
         static_cast<std::uint64_t>(attempt);
}

ReplicateRecord run_one(std::int64_t index, const SimulationConfig& config,
                        bool want_lse, bool want_lad) {
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kMaxAttempts)
      throw Error("run_study: replicate " + std::to_string(index) +
                  " failed " + std::to_string(kMaxAttempts) + " times");
    RngStream rng(config.seed, stream_key(index, attempt));
    const Replicate rep = generate_replicate(rng, config);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rep.n);
    try {
      ReplicateRecord rec;
      rec.index = index;
      rec.n = rep.n;
      rec.params = rep.params;
      rec.attempts = attempt + 1;
      if (want_lse) rec.lse = pack(fit_lse_vectors(rep.y, rep.m, rep.x, ones));
      if (want_lad) rec.lad = pack(fit_lad_vectors(rep.y, rep.m, rep.x, ones));
      return rec;
    } catch (const CollinearityError&) {
      continue;  // degenerate draw; take the next sub-stream
    } catch (const ConvergenceError&) {
      continue;
    }
  }
}

}  // namespace

SimulationReport run_study(const SimulationConfig& config) {
  if (config.replicates < 1)
    throw DomainError("run_study: replicates must be >= 1");
  if (config.n_min < 5 || config.n_min > config.n_max)
    throw DomainError("run_study: bad n range");
  if (config.frameworks.empty())
    throw DomainError("run_study: no frameworks selected");

  const bool want_lad =
      std::find(config.frameworks.begin(), config.frameworks.end(),
                Framework::lad_z) != config.frameworks.end();
  const bool want_lse =
      std::find(config.frameworks.begin(), config.frameworks.end(),
                Framework::lse_f) != config.frameworks.end() ||
      std::find(config.frameworks.begin(), config.frameworks.end(),
                Framework::lse_sobel) != config.frameworks.end();

  SimulationReport report;
  report.config = config;
  report.records.resize(static_cast<std::size_t>(config.replicates));

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (std::int64_t i = 0; i < config.replicates; ++i)
      report.records[static_cast<std::size_t>(i)] =
          run_one(i, config, want_lse, want_lad);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::int64_t i = t; i < config.replicates; i += threads)
            report.records[static_cast<std::size_t>(i)] =
                run_one(i, config, want_lse, want_lad);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (const auto& rec : report.records)
    report.regenerated += rec.attempts - 1;

  const auto grid =
      alpha_grid(config.alpha_grid_size, config.alpha_lo, config.alpha_hi);
  for (const Framework fw : config.frameworks) {
    for (const Condition cond :
         {Condition::io_all, Condition::io_dplementary,
          Condition::io_dpetitive, Condition::competitive}) {
      ConditionCurve curve;
      curve.framework = fw;
      curve.condition = cond;
      curve.alpha = grid;
      curve.numerator.resize(grid.size(), 0);
      curve.denominator.resize(grid.size(), 0);
      curve.proportion.resize(grid.size(), 0.0);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double alpha = grid[g];
        std::int64_t num = 0, den = 0;
        for (const auto& rec : report.records) {
          if (!condition_holds(rec, fw, cond, alpha)) continue;
          ++den;
          if (total_effect_pvalue(rec, fw) >= alpha) ++num;
        }
        curve.numerator[g] = num;
        curve.denominator[g] = den;
        curve.proportion[g] =
            den > 0 ? static_cast<double>(num) / static_cast<double>(den)
                    : std::numeric_limits<double>::quiet_NaN();
      }
      report.curves.push_back(std::move(curve));
    }
  }
  return report;
}

}  // namespace medgeo
