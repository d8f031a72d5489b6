#include <benchmark/benchmark.h>
#include <omp.h>

#include "qcgaps/cps.hpp"
#include "qcgaps/gapstats.hpp"

using namespace qcgaps;

namespace {

const CutProjectSpec& ab_spec() {
  static const CutProjectSpec spec = build_spec(Preset::ammann_beenker, {0, 0});
  return spec;
}

void BM_CountSerial(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_points(ab_spec(), R, 1));
  state.counters["points"] = static_cast<double>(count_points(ab_spec(), R, 1));
}

void BM_CountParallel(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_points(ab_spec(), R, 0));
  state.counters["threads"] = omp_get_max_threads();
}

// enumerate, then std::sort with exact tie resolution
void BM_DirectionsSerialReference(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto pts = enumerate_points(ab_spec(), R);
    benchmark::DoNotOptimize(directions(ab_spec(), pts).size());
  }
}

void BM_DirectionsParallel(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  DirectionOptions opt;
  opt.sectors = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(directions(ab_spec(), R, opt).size());
}

void BM_GapStatistics(benchmark::State& state) {
  const DirectionList dirs = directions(ab_spec(), static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const GapStatistics st = gap_statistics(dirs);
    benchmark::DoNotOptimize(st.F(10));
  }
}

}  // namespace

BENCHMARK(BM_CountSerial)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectionsSerialReference)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectionsParallel)->Args({500, 1})->Args({1000, 1})->Args({1000, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GapStatistics)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
