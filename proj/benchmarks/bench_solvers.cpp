#include <benchmark/benchmark.h>

#include "csched/engine.hpp"
#include "csched/exact.hpp"
#include "csched/heuristics.hpp"
#include "csched/ingest.hpp"
#include "csched/metaheur.hpp"

namespace {

csched::Problem synthetic_problem(std::size_t size) {
  csched::SyntheticSpec spec;
  spec.node_count = size;
  spec.task_count = size;
  const auto g = csched::generate_synthetic(spec);
  csched::Instance instance;
  instance.nodes = g.cluster.nodes;
  instance.transfer_rates = g.cluster.transfer_rates;
  instance.workflows = {g.workflow};
  return csched::Problem(instance, g.workflow);
}

void BM_Heft(benchmark::State& state) {
  const auto problem = synthetic_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csched::solve_heft(problem));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Heft)->RangeMultiplier(10)->Range(5, 5000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Olb(benchmark::State& state) {
  const auto problem = synthetic_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csched::solve_olb(problem));
}
BENCHMARK(BM_Olb)->RangeMultiplier(10)->Range(5, 500)->Unit(benchmark::kMillisecond);

void BM_Exact(benchmark::State& state) {
  const auto problem = synthetic_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csched::solve_exact(problem, csched::SolveConfig{5.0}));
}
BENCHMARK(BM_Exact)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Ga(benchmark::State& state) {
  const auto problem = synthetic_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csched::solve_ga(problem));
}
BENCHMARK(BM_Ga)->RangeMultiplier(10)->Range(5, 500)->Unit(benchmark::kMillisecond);

void BM_Timing(benchmark::State& state) {
  const auto problem = synthetic_problem(static_cast<std::size_t>(state.range(0)));
  const auto assignment = csched::solve_heft(problem).assignment;
  for (auto _ : state) benchmark::DoNotOptimize(csched::time_assignment(problem, assignment));
}
BENCHMARK(BM_Timing)->RangeMultiplier(10)->Range(5, 500)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
