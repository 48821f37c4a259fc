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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lanebench/evaluator.hpp"
#include "lanebench/lane_model.hpp"
#include "lanebench/raster.hpp"

namespace lanebench {

// Portable random source: std::mt19937_64 is fully specified, the standard
// distributions are not, so variates are derived from raw output here.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal(double mean, double sigma);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct SynthConfig {
  int images = 200;
  int lanes_per_image = 4;
  double noise_sigma = 0.0;
  double drop_prob = 0.0;
  std::uint64_t seed = 0;
  Canvas canvas{};
  bool with_categories = false;  // round-robin over the nine categories
};

void validate_synth_config(const SynthConfig& cfg);

struct SynthImage {
  std::string stem;  // e.g. "synth/00012"
  std::vector<Polyline> gt;
  std::vector<Polyline> pred;
  std::optional<Category> category;
};

std::vector<SynthImage> generate_synthetic(const SynthConfig& cfg);

// Writes <out>/list.txt, <out>/gt/<stem>.lines.txt, <out>/pred/<stem>.lines.txt,
// <out>/manifest.json and, with categories, <out>/categories/test*_*.txt.
void write_synthetic_tree(const std::vector<SynthImage>& images, const SynthConfig& cfg,
                          const std::filesystem::path& out_dir);

// In-memory evaluation images on the evaluation grid (lanes covering no grid
// row are skipped).
std::vector<EvalImage> synthetic_eval_images(const std::vector<SynthImage>& images, const YGrid& grid);

}  // namespace lanebench
