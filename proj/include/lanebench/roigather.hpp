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

#include <cstddef>
#include <span>
#include <vector>

#include "lanebench/lane_model.hpp"
#include "lanebench/tensor_file.hpp"

namespace lanebench {

// C x height x width feature grid, row-major within each channel.
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  FeatureMap() = default;
  FeatureMap(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), values(c * h * w, fill) {}

  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * height + y) * width + x];
  }
  double& at(std::size_t c, std::size_t y, std::size_t x) { return values[(c * height + y) * width + x]; }

  void validate() const;
};

// channels x n_points, row-major (one row per channel).
struct ROIFeature {
  std::size_t channels = 0;
  std::size_t n_points = 0;
  std::vector<double> values;

  double at(std::size_t c, std::size_t j) const { return values[c * n_points + j]; }
};

struct PoolConfig {
  std::size_t n_sample_points = 36;
  std::size_t resized_h = 10;
  std::size_t resized_w = 25;
  std::size_t channels = 64;
  double image_width = 800.0;  // image-to-feature-map scaling along x
};

// conv_kernel: C_out x C_in x k (k odd), convolution along the point axis
// with zero same-padding. fc_matrix: C x (C_out * N_p), fc_bias: C.
struct GatherWeights {
  Tensor conv_kernel;
  Tensor fc_matrix;
  Tensor fc_bias;
};

// Bilinear blend of the four nodes around (x, y) in grid coordinates.
// Samples outside [0, width-1] x [0, height-1] are zero.
std::vector<double> bilinear_sample(const FeatureMap& fmap, double x, double y);

// Samples cfg.n_sample_points uniformly along the prior's valid extent on
// every level and stacks the levels along the channel axis (level 0 first).
ROIFeature extract_roi_feature(std::span<const FeatureMap> fmaps, const LanePrior& prior,
                               const YGrid& grid, const PoolConfig& cfg);

struct AttentionResult {
  std::vector<double> attention;  // M
  std::vector<double> aggregated;  // C
  std::vector<double> out;         // C, x_p + aggregated
};

// Scaled dot-product attention of one C-vector over the M columns of a
// C x M matrix stored row-major.
AttentionResult roi_attention(std::span<const double> x_p, std::span<const double> x_f,
                              std::size_t channels, std::size_t m);

std::vector<double> softmax(std::span<const double> logits);

// Bilinear resize of every channel to out_h x out_w (corner-aligned).
FeatureMap resize_bilinear(const FeatureMap& fmap, std::size_t out_h, std::size_t out_w);

// fmaps.front() is the current level; attention runs over its resized map.
std::vector<double> roigather_forward(std::span<const FeatureMap> fmaps, const LanePrior& prior,
                                      const YGrid& grid, const PoolConfig& cfg,
                                      const GatherWeights& weights);

GatherWeights gather_weights_from_file(const TensorFile& file);
TensorFile gather_weights_to_file(const GatherWeights& weights);

}  // namespace lanebench
