#include <benchmark/benchmark.h>

#include <limits>
#include <vector>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/instances.hpp"
#include "sofmdim/mapspace.hpp"
#include "sofmdim/metric_space.hpp"
#include "sofmdim/random.hpp"

using namespace sofmdim;

namespace {

FinitePseudometricSpace random_points(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> coords(n);
  for (auto& c : coords) c = rng.unit();
  return FinitePseudometricSpace::line(coords);
}

SolverOptions wide() {
  SolverOptions o;
  o.max_exact_points = 256;
  return o;
}

void BM_SeparatedExact(benchmark::State& state) {
  const auto space = random_points(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(separated_number(space, 0.1, SolveMode::exact, wide()).value);
}
BENCHMARK(BM_SeparatedExact)->Arg(12)->Arg(24)->Arg(200);

void BM_SpanningExact(benchmark::State& state) {
  const auto space = random_points(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(spanning_number(space, 0.1, SolveMode::exact, wide()).value);
}
BENCHMARK(BM_SpanningExact)->Arg(12)->Arg(24)->Arg(200);

void BM_SeparatedGreedy(benchmark::State& state) {
  const auto space = random_points(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(separated_number(space, 0.05, SolveMode::greedy).value);
}
BENCHMARK(BM_SeparatedGreedy)->Arg(1000)->Arg(4000);

void BM_MeshCover(benchmark::State& state) {
  const auto space = random_points(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(cover_number_mesh(space, 0.1).value);
}
BENCHMARK(BM_MeshCover)->Arg(12)->Arg(24);

void BM_EnumerateMapSpace(benchmark::State& state) {
  const MapFamily fam;
  const auto in = make_map_instance(fam, 31, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_mapspace(in.spec).size());
}
BENCHMARK(BM_EnumerateMapSpace)->Arg(0)->Arg(1)->Arg(2);

void BM_GridIntervalStage(benchmark::State& state) {
  const auto sys = make_grid_interval_shift(static_cast<std::size_t>(state.range(0)), 4);
  const std::vector<FolnerSet> fns{FolnerSet::interval(0, 4)};
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(amenable_finite_stage(sys, fns, eps, std::numeric_limits<double>::infinity()).ratios);
}
BENCHMARK(BM_GridIntervalStage)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
