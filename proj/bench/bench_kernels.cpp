// Serial reference vs OpenMP-parallel runs of the three bulk kernels. The
// parallel paths are deterministic (counter-based streams, pure per-index
// writes), so both rows of each pair compute identical output.
#include <benchmark/benchmark.h>

#include <vector>

#include "maxident/generator.hpp"
#include "maxident/identification.hpp"
#include "maxident/joint_cdf.hpp"

using namespace maxident;

namespace {

ComponentSystem make_system() {
  auto e = Distribution::exponential(1.0);
  return ComponentSystem::independent(e, e, e);
}

const auto kCoeffs = ScaleCoefficients::all_positive(1.0, 2.0, 2.0, 1.0);

Exec pick(const benchmark::State& state) {
  return state.range(0) ? Exec::parallel : Exec::serial;
}

void BM_sample_joint(benchmark::State& state) {
  auto system = make_system();
  auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto pairs = sample_joint(system, kCoeffs, n, 42, pick(state));
    benchmark::DoNotOptimize(pairs.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n));
}

void BM_eval_grid(benchmark::State& state) {
  auto system = make_system();
  auto g = JointCdf2D::analytic(system, kCoeffs);
  auto k = static_cast<std::size_t>(state.range(1));
  std::vector<double> nodes(k);
  for (std::size_t i = 0; i < k; ++i)
    nodes[i] = 0.05 + 5.0 * static_cast<double>(i) / static_cast<double>(k);
  for (auto _ : state) {
    auto vals = eval_grid(g, nodes, nodes, pick(state));
    benchmark::DoNotOptimize(vals.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(k * k));
}

void BM_validate_generator(benchmark::State& state) {
  Marginals4 m = {Distribution::uniform(0.0, 1.0),
                  Distribution::uniform(0.0, 1.0),
                  Distribution::uniform(0.0, 1.0),
                  Distribution::uniform(0.0, 1.0)};
  auto gen = GeneratorSpec::fgm(-0.5);
  auto points = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto val = validate_generator(gen, m, points, pick(state));
    benchmark::DoNotOptimize(&val);
  }
}

void BM_solver(benchmark::State& state) {
  auto system = make_system();
  auto g = JointCdf2D::analytic(system, kCoeffs);
  auto n = static_cast<std::size_t>(state.range(1));
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = 0.1 + 3.9 * static_cast<double>(i) / static_cast<double>(n - 1);
  GridSolverConfig cfg;
  for (auto _ : state) {
    auto rec = recover_positive_general(g, kCoeffs, grid, cfg, pick(state));
    benchmark::DoNotOptimize(&rec);
  }
}

}  // namespace

BENCHMARK(BM_sample_joint)
    ->ArgNames({"parallel", "n"})
    ->Args({0, 1 << 15})
    ->Args({1, 1 << 15})
    ->Args({0, 1 << 18})
    ->Args({1, 1 << 18})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_eval_grid)
    ->ArgNames({"parallel", "k"})
    ->Args({0, 128})
    ->Args({1, 128})
    ->Args({0, 512})
    ->Args({1, 512})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_validate_generator)
    ->ArgNames({"parallel", "points"})
    ->Args({0, 7})
    ->Args({1, 7})
    ->Args({0, 11})
    ->Args({1, 11})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_solver)
    ->ArgNames({"parallel", "nodes"})
    ->Args({0, 24})
    ->Args({1, 24})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
