#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "medgeo/distributions.hpp"
#include "medgeo/estimation.hpp"
#include "medgeo/geometry.hpp"
#include "medgeo/reduction.hpp"
#include "medgeo/rng.hpp"
#include "medgeo/simulation.hpp"

namespace {

medgeo::Replicate make_replicate(int n) {
  medgeo::SimulationConfig config;
  config.n_min = n;
  config.n_max = n;
  medgeo::RngStream rng(1, 1);
  return medgeo::generate_replicate(rng, config);
}

void BM_FUpperCritical(benchmark::State& state) {
  const auto d2 = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(medgeo::f_upper_critical(d2, 0.05));
}
BENCHMARK(BM_FUpperCritical)->Arg(48)->Arg(997)->Arg(100000);

void BM_FitLse(benchmark::State& state) {
  const auto rep = make_replicate(static_cast<int>(state.range(0)));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rep.n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        medgeo::fit_lse_vectors(rep.y, rep.m, rep.x, ones));
}
BENCHMARK(BM_FitLse)->Arg(10)->Arg(100)->Arg(1000);

void BM_FitLad(benchmark::State& state) {
  const auto rep = make_replicate(static_cast<int>(state.range(0)));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rep.n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        medgeo::fit_lad_vectors(rep.y, rep.m, rep.x, ones));
}
BENCHMARK(BM_FitLad)->Arg(10)->Arg(100)->Arg(1000);

void BM_CanonicalReduce(benchmark::State& state) {
  const auto rep = make_replicate(static_cast<int>(state.range(0)));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rep.n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        medgeo::canonical_reduce_vectors(rep.y, rep.m, rep.x, ones));
}
BENCHMARK(BM_CanonicalReduce)->Arg(100)->Arg(1000);

void BM_WitnessIndirectOnly(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(medgeo::witness_indirect_only(
        50, 0.05, medgeo::IndirectSubtype::d_plementary));
}
BENCHMARK(BM_WitnessIndirectOnly);

void BM_SmallStudy(benchmark::State& state) {
  medgeo::SimulationConfig config;
  config.replicates = state.range(0);
  config.alpha_grid_size = 100;
  for (auto _ : state) benchmark::DoNotOptimize(medgeo::run_study(config));
}
BENCHMARK(BM_SmallStudy)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
