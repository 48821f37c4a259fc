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

#include <vector>

#include "lanebench/roigather.hpp"
#include "lanebench/tensor_file.hpp"

namespace lanebench::testing {

// Inputs of the frozen ROIGather fixture, decoded from its tensor file.
struct GoldenCase {
  std::vector<FeatureMap> fmaps;
  LanePrior prior;
  YGrid grid{72, 590};
  PoolConfig pool;
  GatherWeights weights;
};

inline FeatureMap fmap_from_tensor(const Tensor& t) {
  FeatureMap f(t.dims.at(0), t.dims.at(1), t.dims.at(2));
  f.values = t.values;
  return f;
}

inline Tensor tensor_from_fmap(const FeatureMap& f) { return {{f.channels, f.height, f.width}, f.values}; }

inline GoldenCase golden_case_from_file(const TensorFile& file) {
  GoldenCase c;
  c.fmaps = {fmap_from_tensor(file.get("fmap_current")), fmap_from_tensor(file.get("fmap_coarse"))};
  const Tensor& scalars = file.get("prior_scalars");  // start_x, start_y, theta, length
  c.prior.start_x = scalars.values.at(0);
  c.prior.start_y = scalars.values.at(1);
  c.prior.theta = scalars.values.at(2);
  c.prior.length = static_cast<int>(scalars.values.at(3));
  c.prior.offsets = file.get("prior_offsets").values;
  const Tensor& pool = file.get("pool");  // n_sample_points, resized_h, resized_w, image_width
  c.pool.n_sample_points = static_cast<std::size_t>(pool.values.at(0));
  c.pool.resized_h = static_cast<std::size_t>(pool.values.at(1));
  c.pool.resized_w = static_cast<std::size_t>(pool.values.at(2));
  c.pool.image_width = pool.values.at(3);
  c.pool.channels = c.fmaps.front().channels;
  c.weights = gather_weights_from_file(file);
  return c;
}

}  // namespace lanebench::testing
