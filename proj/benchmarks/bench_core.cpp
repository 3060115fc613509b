#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "shakedrill/scenario.hpp"

using namespace shakedrill;

namespace {

const std::filesystem::path kFixtures = SHAKEDRILL_FIXTURE_DIR;

const ScenarioBundle& demo() {
  static const ScenarioBundle b = load_bundle(kFixtures / "shakeout_demo" / "manifest.json");
  return b;
}

AccelTimeSeries sine_record(double dt) {
  const auto n = static_cast<std::size_t>(40.0 / dt) + 1;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 0.1 * std::sin(2.0 * std::numbers::pi * i * dt);
  return AccelTimeSeries(dt, std::move(s));
}

void BM_Newmark(benchmark::State& state) {
  const auto ts = sine_record(0.005);
  for (auto _ : state) benchmark::DoNotOptimize(newmark_response(ts, {1.0, 0.05}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ts.size()));
}
BENCHMARK(BM_Newmark);

void BM_ResponseSpectrum(benchmark::State& state) {
  const auto ts = sine_record(0.01);
  std::vector<double> periods;
  for (int i = 0; i < state.range(0); ++i) periods.push_back(0.05 * std::pow(1.08, i));
  for (auto _ : state) benchmark::DoNotOptimize(response_spectrum(ts, periods, 0.05));
}
BENCHMARK(BM_ResponseSpectrum)->Arg(20)->Arg(80);

void BM_LookupIM(benchmark::State& state) {
  const auto& f = demo().field;
  double lon = f.origin().lon;
  for (auto _ : state) {
    lon += 0.0137;
    if (lon > f.max_lon()) lon = f.origin().lon;
    benchmark::DoNotOptimize(lookup_im(f, {lon, 33.9}));
  }
}
BENCHMARK(BM_LookupIM);

void BM_RunDrill(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_drill(demo(), {-116.4, 33.9}, RoomType::Hospital, ++seed));
}
BENCHMARK(BM_RunDrill)->Unit(benchmark::kMillisecond);

void BM_MonteCarloLoss(benchmark::State& state) {
  const auto draws = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo_loss(demo(), {-116.4, 33.9}, RoomType::Hospital, draws, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloLoss)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
