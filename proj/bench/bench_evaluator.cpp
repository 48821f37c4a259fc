// Copyright 2026 The Lanebench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scanline/OpenMP evaluator against the serial brute-force bitmap reference.

#include <benchmark/benchmark.h>

#include "lanebench/evaluator.hpp"
#include "lanebench/raster.hpp"
#include "lanebench/synth.hpp"

namespace {

using namespace lanebench;

const std::vector<EvalImage>& images(int n) {
  static std::map<int, std::vector<EvalImage>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    SynthConfig cfg;
    cfg.images = n;
    cfg.noise_sigma = 5;
    cfg.drop_prob = 0.1;
    cfg.seed = 3;
    it = cache.emplace(n, synthetic_eval_images(generate_synthetic(cfg), EvalConfig{}.grid())).first;
  }
  return it->second;
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& imgs = images(static_cast<int>(state.range(0)));
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_images(imgs, EvalConfig{}, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(imgs.size()));
}
BENCHMARK(BM_EvaluateParallel)->Args({200, 1})->Args({200, 4})->Args({200, 8})->Unit(benchmark::kMillisecond);

void BM_EvaluateReference(benchmark::State& state) {
  const auto& imgs = images(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_images_reference(imgs, EvalConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(imgs.size()));
}
BENCHMARK(BM_EvaluateReference)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RasterizeScanline(benchmark::State& state) {
  const Polyline p{{300, 590}, {700, 250}, {800, 0}};
  const Canvas canvas;
  for (auto _ : state) benchmark::DoNotOptimize(rasterize_lane(p, 30, canvas));
}
BENCHMARK(BM_RasterizeScanline);

void BM_RasterizeBitmap(benchmark::State& state) {
  const Polyline p{{300, 590}, {700, 250}, {800, 0}};
  const Canvas canvas;
  for (auto _ : state) benchmark::DoNotOptimize(reference_bitmap(p, 30, canvas));
}
BENCHMARK(BM_RasterizeBitmap);

}  // namespace

BENCHMARK_MAIN();
