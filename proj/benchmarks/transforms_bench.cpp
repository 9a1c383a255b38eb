#include <benchmark/benchmark.h>

#include <random>

#include "hyperaug/hyperaug.hpp"

namespace {

using namespace hyperaug;

HyperImage patch(std::size_t size, std::size_t channels) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  HyperImage img(size, size, channels);
  for (float& v : img.data()) v = dist(gen);
  return img;
}

AugmentConfig full_config() {
  AugmentConfig c;
  c.flip_horizontal = c.flip_vertical = true;
  c.max_rotation = 90.0;
  c.max_translation = 0.25;
  c.max_zoom = 1.5;
  c.max_shear = 0.05;
  c.speckle_variance = 0.010;
  return c;
}

void BM_WarpAffine(benchmark::State& state) {
  const auto img = patch(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto m = make_affine(sample_params(full_config(), 3, img.width(), img.height()), img.width(),
                             img.height());
  for (auto _ : state) benchmark::DoNotOptimize(warp_affine(img, m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_WarpAffine)->Args({64, 3})->Args({64, 13})->Args({256, 13});

void BM_Speckle(benchmark::State& state) {
  const auto img = patch(64, 13);
  for (auto _ : state) benchmark::DoNotOptimize(speckle(img, 0.010, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Speckle);

void BM_FlipH(benchmark::State& state) {
  const auto img = patch(64, 13);
  for (auto _ : state) benchmark::DoNotOptimize(flip_h(img));
}
BENCHMARK(BM_FlipH);

void BM_AugmentFullConfig(benchmark::State& state) {
  const auto img = patch(64, 13);
  const auto config = full_config();
  Seed seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(augment_image(img, config, seed++));
}
BENCHMARK(BM_AugmentFullConfig);

void BM_EpochPlan(benchmark::State& state) {
  std::uint64_t epoch = 0;
  for (auto _ : state) benchmark::DoNotOptimize(epoch_plan(21000, 500, 128, 0, epoch++));
}
BENCHMARK(BM_EpochPlan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
