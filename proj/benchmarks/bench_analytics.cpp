#include <benchmark/benchmark.h>

#include "vanet/analytics.hpp"
#include "vanet/channel.hpp"

#include <cmath>

using namespace vanet;
using namespace vanet::analytics;

static void BM_ExpectedSpeedQuadrature(benchmark::State& state) {
  const auto sd = SpeedDistribution::uniform(0.0, 20.0);
  const auto ad = AngleDistribution::uniform();
  QuadratureSpec q;
  q.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expected_relative_speed_general(sd, ad, q));
}
BENCHMARK(BM_ExpectedSpeedQuadrature)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ExpectedSpeedMonteCarlo(benchmark::State& state) {
  const auto sd = SpeedDistribution::uniform(0.0, 20.0);
  const auto ad = AngleDistribution::uniform();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_expected_speed(sd, ad, n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ExpectedSpeedMonteCarlo)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_ReceptionProbability(benchmark::State& state) {
  const auto ch = channel::make_channel(300.0, channel::Fading::Nakagami);
  double d = 0.0;
  for (auto _ : state) {
    d = d >= 300.0 ? 0.0 : d + 0.37;
    benchmark::DoNotOptimize(channel::reception_probability(d, ch));
  }
}
BENCHMARK(BM_ReceptionProbability);
