// OpenMP kernels against their serial references. Both sides produce the
// same output, so the ratio of the timings is the parallel speedup.

#include <benchmark/benchmark.h>

#include <cmath>

#include "selfsim/fourier.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/renewal.hpp"

using namespace selfsim;

namespace {

ifs::IFS planar_system() {
  auto rot = [](double a) {
    ifs::Mat R(2, 2);
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return R;
  };
  ifs::Vec a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 0;
  c << 0, 1;
  return ifs::IFS(2, {ifs::Similarity::make(0.45, rot(0.3), a), ifs::Similarity::make(0.4, rot(1.1), b),
                      ifs::Similarity::make(0.35, rot(-0.7), c)});
}

const ifs::ProbabilityVector kThirds = ifs::ProbabilityVector::uniform(3);

void BM_ChaosGame(benchmark::State& st) {
  auto sys = planar_system();
  for (auto _ : st) benchmark::DoNotOptimize(ifs::chaos_game_sample(sys, kThirds, 1 << 18, 7));
}
void BM_ChaosGameSerial(benchmark::State& st) {
  auto sys = planar_system();
  for (auto _ : st) benchmark::DoNotOptimize(ifs::chaos_game_sample_serial(sys, kThirds, 1 << 18, 7));
}

void BM_MuHat(benchmark::State& st) {
  auto sys = planar_system();
  fourier::Evaluator ev(sys, kThirds, {128, 1e-30});
  PrecisionScope scope(128);
  RealVector xi{Real(40), Real(25)};
  for (auto _ : st) benchmark::DoNotOptimize(ev(xi, 1e-6));
}
void BM_MuHatSerial(benchmark::State& st) {
  auto sys = planar_system();
  fourier::Evaluator ev(sys, kThirds, {128, 1e-30});
  PrecisionScope scope(128);
  RealVector xi{Real(40), Real(25)};
  for (auto _ : st) benchmark::DoNotOptimize(ev.serial(xi, 1e-6));
}

renewal::WalkConfig walk() {
  return renewal::lattice_walk({1, 2, 3}, ifs::ProbabilityVector::uniform(3), 1);
}

void BM_FirstHits(benchmark::State& st) {
  auto w = walk();
  for (auto _ : st) benchmark::DoNotOptimize(renewal::simulate_first_hits(w, 200, 1 << 16, 3));
}
void BM_FirstHitsSerial(benchmark::State& st) {
  auto w = walk();
  for (auto _ : st) benchmark::DoNotOptimize(renewal::simulate_first_hits_serial(w, 200, 1 << 16, 3));
}

void BM_StripScan(benchmark::State& st) {
  auto s = fourier::correlation_sample(planar_system(), kThirds, 1 << 15, 5);
  for (auto _ : st) benchmark::DoNotOptimize(fourier::strip_mass_scan(s, 64, 0.02));
}
void BM_StripScanSerial(benchmark::State& st) {
  auto s = fourier::correlation_sample(planar_system(), kThirds, 1 << 15, 5);
  for (auto _ : st) benchmark::DoNotOptimize(fourier::strip_mass_scan_serial(s, 64, 0.02));
}

}  // namespace

BENCHMARK(BM_ChaosGame)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChaosGameSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuHat)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuHatSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FirstHits)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FirstHitsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StripScan)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StripScanSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
