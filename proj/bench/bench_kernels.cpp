#include <benchmark/benchmark.h>

#include <cstdlib>

#include "minkiso/isophote.hpp"
#include "minkiso/parallel.hpp"
#include "minkiso/surface.hpp"

using namespace minkiso;

namespace {

const ParamSurface& hyperboloid() {
  static const ParamSurface s = builtin_surface("hyperboloid");
  return s;
}

const Vec3M kAxis{1.0, 0.0, 0.0};

void BM_IlluminationSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(illumination_field_serial(hyperboloid(), kAxis, n));
}

void BM_IlluminationOpenMP(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(illumination_field(hyperboloid(), kAxis, n));
  state.counters["threads"] = thread_count();
}

void BM_VerifySpacelikeSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_spacelike_serial(hyperboloid(), n));
}

void BM_VerifySpacelikeOpenMP(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_spacelike(hyperboloid(), n));
  state.counters["threads"] = thread_count();
}

// Full extraction; range(1) == 1 caps the workers at one through ISOPHOTE_THREADS.
void BM_Extract(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const bool serial = state.range(1) == 1;
  if (serial) setenv("ISOPHOTE_THREADS", "1", 1);
  const AxisSpec axis = AxisSpec::make(kAxis, AxisKind::Timelike, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_isophotes(hyperboloid(), axis, n, 1e-12));
  state.counters["threads"] = thread_count();
  if (serial) unsetenv("ISOPHOTE_THREADS");
}

}  // namespace

BENCHMARK(BM_IlluminationSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IlluminationOpenMP)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySpacelikeSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySpacelikeOpenMP)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Extract)->Args({512, 1})->Args({512, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
