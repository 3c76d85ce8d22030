#include <benchmark/benchmark.h>

#include <vector>

#include "dartscore/raster.hpp"
#include "dartscore/scoring.hpp"
#include "dartscore/sim.hpp"

using namespace dartscore;

namespace {

SweepConfig sweep_config(int n_scenes) {
  SweepConfig cfg;
  cfg.n_scenes = n_scenes;
  cfg.seed = 4242;
  cfg.sigma_px = {0, 2, 4};
  cfg.p_miss = {0, 0.1};
  cfg.fp_rate = {0.5};
  cfg.noise.cal_false_positives = true;
  return cfg;
}

void BM_sweep(benchmark::State& state) {
  const auto cfg = sweep_config(static_cast<int>(state.range(0)));
  const BoardSpec spec = default_board_spec();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 6);
}

void BM_sweep_serial(benchmark::State& state) {
  const auto cfg = sweep_config(static_cast<int>(state.range(0)));
  const BoardSpec spec = default_board_spec();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(cfg, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 6);
}

RasterImage gradient(int size) {
  RasterImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int c = 0; c < 3; ++c)
        img.rgb[(static_cast<std::size_t>(y) * size + x) * 3 + c] =
            static_cast<std::uint8_t>((x * (c + 1) + y * (3 - c)) & 0xff);
  return img;
}

const Homography kWarp({0.95, 0.08, 20, -0.06, 1.02, 15, 1.5e-4, -1e-4, 1});

void BM_warp(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const RasterImage img = gradient(size);
  for (auto _ : state) benchmark::DoNotOptimize(warp_raster(img, kWarp, size, size));
  state.SetItemsProcessed(state.iterations() * size * size);
}

void BM_warp_serial(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const RasterImage img = gradient(size);
  for (auto _ : state) benchmark::DoNotOptimize(warp_raster_serial(img, kWarp, size, size));
  state.SetItemsProcessed(state.iterations() * size * size);
}

std::vector<DetectionSet> detection_batch(int n) {
  const auto cfg = sweep_config(n);
  const BoardSpec spec = default_board_spec();
  NoiseModel noise;
  noise.sigma_px = 2;
  noise.p_miss = 0.05;
  noise.fp_rate = 0.5;
  std::vector<DetectionSet> out;
  for (int i = 0; i < n; ++i) out.push_back(sweep_detections(cfg, noise, sweep_scene(cfg, spec, i), i));
  return out;
}

void BM_score(benchmark::State& state) {
  const auto sets = detection_batch(static_cast<int>(state.range(0)));
  const BoardSpec spec = default_board_spec();
  for (auto _ : state) benchmark::DoNotOptimize(score_batch(sets, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_score_serial(benchmark::State& state) {
  const auto sets = detection_batch(static_cast<int>(state.range(0)));
  const BoardSpec spec = default_board_spec();
  for (auto _ : state) benchmark::DoNotOptimize(score_batch_serial(sets, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_sweep)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_serial)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_warp)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_warp_serial)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_score)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_score_serial)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
