#include <benchmark/benchmark.h>

#include "vanet/engine.hpp"
#include "vanet/event_queue.hpp"
#include "vanet/rng.hpp"

using namespace vanet;

static void BM_EventQueue(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream rng(1, StreamId::Traffic);
  for (auto _ : state) {
    EventQueue<std::uint64_t> q;
    for (std::size_t i = 0; i < n; ++i) q.push(rng.uniform(0.0, 100.0), i);
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EventQueue)->Arg(1000)->Arg(100000);

static void BM_Simulate(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.protocol = static_cast<routing::Protocol>(state.range(0));
  cfg.node_count = static_cast<std::size_t>(state.range(1));
  cfg.cbr_flows = 18;
  cfg.duration = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg).metrics.data_delivered);
  state.SetLabel(routing::to_string(cfg.protocol));
}
BENCHMARK(BM_Simulate)
    ->ArgsProduct({{0, 1, 2}, {40, 100}})
    ->Unit(benchmark::kMillisecond);
