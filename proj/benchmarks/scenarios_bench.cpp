#include <benchmark/benchmark.h>

#include <random>

#include "scoop/scenarios.hpp"
#include "scoop/verify.hpp"
#include "scoop/wait_graph.hpp"

using namespace scoop;

namespace {

void BM_Philosophers(benchmark::State& state) {
  ScenarioConfig c;
  c.scenario = "philosophers";
  c.n = state.range(0);
  c.rounds = 10;
  std::uint64_t seed = 0;
  std::size_t events = 0;
  for (auto _ : state) {
    c.seed = seed++;
    auto r = run_scenario(c);
    events += r.trace.size();
    benchmark::DoNotOptimize(r);
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Philosophers)->Arg(2)->Arg(5)->Arg(20);

void BM_ProducerConsumer(benchmark::State& state) {
  ScenarioConfig c;
  c.scenario = "producer-consumer";
  c.capacity = state.range(0);
  c.items = 100;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = seed++;
    benchmark::DoNotOptimize(run_scenario(c));
  }
}
BENCHMARK(BM_ProducerConsumer)->Arg(1)->Arg(8);

void BM_Hexapod(benchmark::State& state) {
  ScenarioConfig c;
  c.scenario = "hexapod";
  c.steps = 50;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = seed++;
    benchmark::DoNotOptimize(run_scenario(c));
  }
}
BENCHMARK(BM_Hexapod);

void BM_VerifyPhilosophersTrace(benchmark::State& state) {
  ScenarioConfig c;
  c.scenario = "philosophers";
  const auto trace = run_scenario(c).trace;
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_race_freedom(trace));
    benchmark::DoNotOptimize(check_order_and_sync(trace));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_VerifyPhilosophersTrace);

void BM_DetectDeadlock(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::mt19937_64 rng(1);
  WaitForGraph g;
  // Sparse random graph plus a ring closing through every node.
  for (std::uint64_t i = 0; i < n; ++i) {
    g.add_edge(ProcessorId{i}, ProcessorId{(i + 1) % n}, RegionId{i});
    g.add_edge(ProcessorId{i}, ProcessorId{rng() % n}, RegionId{i + n});
  }
  for (auto _ : state) benchmark::DoNotOptimize(detect_deadlock(g));
}
BENCHMARK(BM_DetectDeadlock)->Arg(8)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
