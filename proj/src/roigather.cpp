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

#include "lanebench/roigather.hpp"

#include <algorithm>
#include <cmath>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

// Continuous corner-aligned coordinate of output index i among n samples of
// a span covering [0, extent - 1].
double aligned_coord(std::size_t i, std::size_t n, std::size_t extent) {
  if (n <= 1) return 0.0;
  return static_cast<double>(i) * static_cast<double>(extent - 1) / static_cast<double>(n - 1);
}

}  // namespace

void FeatureMap::validate() const {
  if (channels == 0 || height == 0 || width == 0) config_error("feature map has an empty dimension");
  if (values.size() != channels * height * width) config_error("feature map size mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw_invalid("feature map holds a non-finite value");
  }
}

std::vector<double> bilinear_sample(const FeatureMap& fmap, double x, double y) {
  std::vector<double> out(fmap.channels, 0.0);
  const double max_x = static_cast<double>(fmap.width - 1);
  const double max_y = static_cast<double>(fmap.height - 1);
  if (!(x >= 0.0 && x <= max_x && y >= 0.0 && y <= max_y)) return out;
  const auto x0 = static_cast<std::size_t>(std::floor(x));
  const auto y0 = static_cast<std::size_t>(std::floor(y));
  const std::size_t x1 = std::min(x0 + 1, fmap.width - 1);
  const std::size_t y1 = std::min(y0 + 1, fmap.height - 1);
  const double lx = x - static_cast<double>(x0);
  const double ly = y - static_cast<double>(y0);
  for (std::size_t c = 0; c < fmap.channels; ++c) {
    const double top = (1.0 - lx) * fmap.at(c, y0, x0) + lx * fmap.at(c, y0, x1);
    const double bottom = (1.0 - lx) * fmap.at(c, y1, x0) + lx * fmap.at(c, y1, x1);
    out[c] = (1.0 - ly) * top + ly * bottom;
  }
  return out;
}

ROIFeature extract_roi_feature(std::span<const FeatureMap> fmaps, const LanePrior& prior,
                               const YGrid& grid, const PoolConfig& cfg) {
  if (fmaps.empty()) config_error("no feature levels supplied");
  if (cfg.n_sample_points == 0) config_error("n_sample_points must be positive");
  if (!(cfg.image_width > 0.0)) config_error("image_width must be positive");
  const std::size_t channels = fmaps.front().channels;
  for (const auto& f : fmaps) {
    f.validate();
    if (f.channels != channels) config_error("feature levels differ in channel count");
  }
  const Lane lane = prior_to_lane(prior, grid);
  if (lane.valid_count() == 0) throw Error(ErrorKind::kEmptyLane, "prior has no valid points");

  const std::size_t np = cfg.n_sample_points;
  ROIFeature roi;
  roi.channels = channels * fmaps.size();
  roi.n_points = np;
  roi.values.assign(roi.channels * np, 0.0);

  const double span = static_cast<double>(lane.valid_count() - 1);
  for (std::size_t j = 0; j < np; ++j) {
    const double pos = lane.valid_begin() + (np == 1 ? 0.0 : span * static_cast<double>(j) / static_cast<double>(np - 1));
    const int i0 = std::min(static_cast<int>(std::floor(pos)), lane.valid_end() - 1);
    const double frac = pos - i0;
    const double x = frac == 0.0 ? lane.x(i0) : lane.x(i0) + frac * (lane.x(i0 + 1) - lane.x(i0));
    const double y = grid.image_height() * pos / (grid.size() - 1);
    for (std::size_t level = 0; level < fmaps.size(); ++level) {
      const FeatureMap& f = fmaps[level];
      const double fx = x / cfg.image_width * static_cast<double>(f.width - 1);
      const double fy = y / grid.image_height() * static_cast<double>(f.height - 1);
      const std::vector<double> v = bilinear_sample(f, fx, fy);
      for (std::size_t c = 0; c < channels; ++c) {
        roi.values[(level * channels + c) * np + j] = v[c];
      }
    }
  }
  return roi;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(logits[j] - peak);
    total += out[j];
  }
  for (double& v : out) v /= total;
  return out;
}

AttentionResult roi_attention(std::span<const double> x_p, std::span<const double> x_f,
                              std::size_t channels, std::size_t m) {
  if (m == 0) throw_invalid("attention needs at least one column");
  if (x_p.size() != channels || x_f.size() != channels * m) throw_invalid("attention shape mismatch");
  for (double v : x_p) {
    if (!std::isfinite(v)) throw_invalid("attention query is not finite");
  }
  for (double v : x_f) {
    if (!std::isfinite(v)) throw_invalid("attention keys are not finite");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(channels));
  std::vector<double> logits(m, 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    const double q = x_p[c];
    const double* row = x_f.data() + c * m;
    for (std::size_t j = 0; j < m; ++j) logits[j] += q * row[j];
  }
  for (double& l : logits) l *= scale;

  AttentionResult r;
  r.attention = softmax(logits);
  r.aggregated.assign(channels, 0.0);
  r.out.resize(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    const double* row = x_f.data() + c * m;
    double g = 0.0;
    for (std::size_t j = 0; j < m; ++j) g += r.attention[j] * row[j];
    r.aggregated[c] = g;
    r.out[c] = x_p[c] + g;
  }
  return r;
}

FeatureMap resize_bilinear(const FeatureMap& fmap, std::size_t out_h, std::size_t out_w) {
  fmap.validate();
  if (out_h == 0 || out_w == 0) config_error("resize target is empty");
  FeatureMap out(fmap.channels, out_h, out_w);
  for (std::size_t i = 0; i < out_h; ++i) {
    const double y = aligned_coord(i, out_h, fmap.height);
    for (std::size_t k = 0; k < out_w; ++k) {
      const double x = aligned_coord(k, out_w, fmap.width);
      const std::vector<double> v = bilinear_sample(fmap, x, y);
      for (std::size_t c = 0; c < fmap.channels; ++c) out.at(c, i, k) = v[c];
    }
  }
  return out;
}

std::vector<double> roigather_forward(std::span<const FeatureMap> fmaps, const LanePrior& prior,
                                      const YGrid& grid, const PoolConfig& cfg,
                                      const GatherWeights& weights) {
  const ROIFeature roi = extract_roi_feature(fmaps, prior, grid, cfg);
  const std::size_t np = roi.n_points;

  const Tensor& kernel = weights.conv_kernel;
  if (kernel.dims.size() != 3 || kernel.values.size() != kernel.element_count()) {
    config_error("conv kernel must be C_out x C_in x k");
  }
  const std::size_t c_out = kernel.dims[0];
  const std::size_t c_in = kernel.dims[1];
  const std::size_t k = kernel.dims[2];
  if (c_in != roi.channels) config_error("conv kernel input channels do not match ROI feature");
  if (k % 2 == 0) config_error("conv kernel size must be odd");

  const std::size_t channels = fmaps.front().channels;
  const Tensor& fc = weights.fc_matrix;
  const Tensor& bias = weights.fc_bias;
  if (fc.dims.size() != 2 || fc.dims[0] != channels || fc.dims[1] != c_out * np ||
      fc.values.size() != fc.element_count()) {
    config_error("fc matrix must be C x (C_out * N_p)");
  }
  if (bias.dims.size() != 1 || bias.dims[0] != channels || bias.values.size() != channels) {
    config_error("fc bias must have C entries");
  }

  // 1-D convolution along the point axis, zero same-padding.
  const auto half = static_cast<std::ptrdiff_t>(k / 2);
  std::vector<double> conv(c_out * np, 0.0);
  for (std::size_t o = 0; o < c_out; ++o) {
    for (std::size_t j = 0; j < np; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < c_in; ++i) {
        const double* w = kernel.values.data() + (o * c_in + i) * k;
        for (std::size_t t = 0; t < k; ++t) {
          const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(j) + static_cast<std::ptrdiff_t>(t) - half;
          if (src < 0 || src >= static_cast<std::ptrdiff_t>(np)) continue;
          acc += w[t] * roi.at(i, static_cast<std::size_t>(src));
        }
      }
      conv[o * np + j] = acc;
    }
  }

  std::vector<double> x_p(channels);
  const std::size_t flat = c_out * np;
  for (std::size_t c = 0; c < channels; ++c) {
    double acc = bias.values[c];
    const double* row = fc.values.data() + c * flat;
    for (std::size_t q = 0; q < flat; ++q) acc += row[q] * conv[q];
    x_p[c] = acc;
  }

  const FeatureMap context = resize_bilinear(fmaps.front(), cfg.resized_h, cfg.resized_w);
  return roi_attention(x_p, context.values, channels, cfg.resized_h * cfg.resized_w).out;
}

GatherWeights gather_weights_from_file(const TensorFile& file) {
  return {file.get("conv_kernel"), file.get("fc_matrix"), file.get("fc_bias")};
}

TensorFile gather_weights_to_file(const GatherWeights& weights) {
  TensorFile file;
  file.put("conv_kernel", weights.conv_kernel);
  file.put("fc_matrix", weights.fc_matrix);
  file.put("fc_bias", weights.fc_bias);
  return file;
}

}  // namespace lanebench
