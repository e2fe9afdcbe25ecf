#include <benchmark/benchmark.h>

#include <random>

#include "manna/audit.hpp"
#include "manna/classify.hpp"
#include "manna/enumerate.hpp"
#include "manna/solver.hpp"
#include "manna/topology.hpp"

namespace {

using namespace manna;

std::vector<Problem> sample(ProblemKind kind, std::size_t n, std::size_t m, std::size_t count) {
  std::mt19937_64 rng(42);
  RandomProblemSpec spec;
  spec.min_agents = spec.max_agents = n;
  spec.min_items = spec.max_items = m;
  std::vector<Problem> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_problem(rng, spec, kind));
  return out;
}

void BM_Classify(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problems = sample(ProblemKind::Positive, n, n, 16);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify(problems[k++ % problems.size()]).kind);
}
BENCHMARK(BM_Classify)->Arg(2)->Arg(4)->Arg(6);

void BM_SolvePositive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problems = sample(ProblemKind::Positive, n, n, 16);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_positive(problems[k++ % problems.size()]).price);
}
BENCHMARK(BM_SolvePositive)->Arg(2)->Arg(4)->Arg(6);

void BM_EnumerateTwoAgents(benchmark::State& state) {
  const Problem p = generate_lower_bound_instance<double>(LowerBoundKind::TwoAgents, 2, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_two_agents(p).profiles.size());
}
BENCHMARK(BM_EnumerateTwoAgents)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateTwoItems(benchmark::State& state) {
  const Problem p = generate_lower_bound_instance<double>(LowerBoundKind::TwoItems, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_two_items(p).profiles.size());
}
BENCHMARK(BM_EnumerateTwoItems)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateGeneral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Problem p = generate_lower_bound_instance<double>(LowerBoundKind::General, n + 1, n);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_general(p).profiles.size());
}
BENCHMARK(BM_EnumerateGeneral)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Components(benchmark::State& state) {
  const Problem p = two_bads_from_ratios(pattern_ratios(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ef_components_two_bads(p).count);
}
BENCHMARK(BM_Components)->Arg(9)->Arg(100);

void BM_ComponentsOracle(benchmark::State& state) {
  const Problem p = two_bads_from_ratios(pattern_ratios(6));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_components(p, state.range(0)));
}
BENCHMARK(BM_ComponentsOracle)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Audit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problems = sample(ProblemKind::Positive, n, n, 8);
  std::vector<Allocation> allocations;
  for (const Problem& p : problems) allocations.push_back(solve_positive(p).allocation);
  std::size_t k = 0;
  for (auto _ : state) {
    const std::size_t i = k++ % problems.size();
    benchmark::DoNotOptimize(audit_allocation(problems[i], allocations[i]).all_passed());
  }
}
BENCHMARK(BM_Audit)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
