#include <benchmark/benchmark.h>

#include "gul/counterexamples.hpp"
#include "gul/gabor.hpp"

namespace {

gul::FockFunction demo_image() {
  return gul::FockFunction::basis(5) * gul::multiplier(std::exp(-10.0 * gul::kPi) / 50.0, 0.25, gul::Sign::plus);
}

gul::GridSpec grid(int per_axis) {
  gul::GridSpec spec;
  spec.x_step = 6.0 / (per_axis - 1);
  spec.w_step = spec.x_step;
  return spec;
}

void BM_spectrogram_grid(benchmark::State& state) {
  const auto image = demo_image();
  const auto spec = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gul::spectrogram_grid(image, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_spectrogram_grid_serial(benchmark::State& state) {
  const auto image = demo_image();
  const auto spec = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gul::spectrogram_grid_serial(image, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

std::vector<gul::SamplePoint> lines() {
  gul::LineFamily fam;
  fam.a = 0.25;
  return gul::sample_line_family(fam, -10.0, 10.0, 0.01);
}

void BM_sample_magnitudes(benchmark::State& state) {
  const auto image = demo_image();
  const auto pts = lines();
  for (auto _ : state) benchmark::DoNotOptimize(gul::sample_magnitudes(image, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void BM_sample_magnitudes_serial(benchmark::State& state) {
  const auto image = demo_image();
  const auto pts = lines();
  for (auto _ : state) benchmark::DoNotOptimize(gul::sample_magnitudes_serial(image, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK(BM_spectrogram_grid)->Arg(121)->Arg(481);
BENCHMARK(BM_spectrogram_grid_serial)->Arg(121)->Arg(481);
BENCHMARK(BM_sample_magnitudes);
BENCHMARK(BM_sample_magnitudes_serial);

BENCHMARK_MAIN();
