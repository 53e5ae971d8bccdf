#include <benchmark/benchmark.h>

#include <random>

#include "ghostpol/optimizer.hpp"
#include "ghostpol/verify.hpp"

using namespace ghostpol;

namespace {

struct Setup {
  ObjectSet set = preset_set("paper-abc");
  JonesMatrix probe = make_probe({0.0, 0.0, 1.0}, 1.0, 0.45);
  ReferenceBank bank = make_bank_coplanar({0.0, 0.0, 1.0}, 0.0, 1.0, 0.02, 3);
};

void BM_Svd2(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const JonesMatrix m = verify::random_jones(rng);
  for (auto _ : state) benchmark::DoNotOptimize(svd2(m));
}
BENCHMARK(BM_Svd2);

void BM_ReducedReference(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const JonesMatrix t = verify::random_jones(rng);
  for (auto _ : state) benchmark::DoNotOptimize(reduced_reference(t, 0.8));
}
BENCHMARK(BM_ReducedReference);

void BM_BuildLibrary(benchmark::State& state) {
  const Setup s;
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_library(s.set, grid, s.probe, s.bank, 1.0));
}
BENCHMARK(BM_BuildLibrary)->Arg(60)->Arg(180);

void BM_SeparationMargin(benchmark::State& state) {
  const Setup s;
  const PatternLibrary lib = build_library(s.set, static_cast<std::size_t>(state.range(0)), s.probe, s.bank, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(separation_margin(lib));
}
BENCHMARK(BM_SeparationMargin)->Arg(60)->Arg(180);

void BM_DesignObjective(benchmark::State& state) {
  const Setup s;
  const OptimizerConfig cfg;
  ProbeTransform probe;
  probe.m1 = {0.0, 0.0, 1.0};
  probe.sigma2 = 0.45;
  const std::vector<double> x = encode_design(probe, s.bank, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(design_objective(x, s.set, 1.0, 3, cfg));
}
BENCHMARK(BM_DesignObjective);

void BM_Identify(benchmark::State& state) {
  const Setup s;
  const PatternLibrary lib = build_library(s.set, 180, s.probe, s.bank, 1.0);
  const CoincidencePattern p = pattern(object_b(), 0.123, s.probe, s.bank, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(identify(p, lib));
}
BENCHMARK(BM_Identify);

}  // namespace

BENCHMARK_MAIN();
