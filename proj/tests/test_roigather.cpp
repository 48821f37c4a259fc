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

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "golden_case.hpp"
#include "lanebench/error.hpp"
#include "lanebench/roigather.hpp"

namespace lanebench {
namespace {

FeatureMap random_map(std::mt19937_64& rng, std::size_t c, std::size_t h, std::size_t w) {
  std::uniform_real_distribution<double> u(-2, 2);
  FeatureMap f(c, h, w);
  for (double& v : f.values) v = u(rng);
  return f;
}

LanePrior vertical_prior(double x, int n) {
  LanePrior p;
  p.start_x = x;
  p.length = n;
  p.offsets.assign(static_cast<std::size_t>(n), 0.0);
  return p;
}

TEST(Bilinear, NodesAreExact) {
  std::mt19937_64 rng(1);
  const FeatureMap f = random_map(rng, 3, 4, 5);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 5; ++x) {
      const auto v = bilinear_sample(f, static_cast<double>(x), static_cast<double>(y));
      for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(v[c], f.at(c, y, x));
    }
  }
}

TEST(Bilinear, MidpointAndHandValue) {
  FeatureMap f(1, 2, 2);
  f.values = {0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(bilinear_sample(f, 0.5, 0)[0], 0.5);
  EXPECT_DOUBLE_EQ(bilinear_sample(f, 0.25, 0.75)[0], 1.75);
}

TEST(Bilinear, OutsideIsZero) {
  FeatureMap f(2, 2, 2, 7.0);
  for (auto [x, y] : {std::pair{-0.1, 0.0}, {1.1, 0.0}, {0.0, -1.0}, {0.0, 1.5}}) {
    const auto v = bilinear_sample(f, x, y);
    EXPECT_EQ(v[0], 0.0);
    EXPECT_EQ(v[1], 0.0);
  }
}

TEST(Bilinear, AffineAlongRows) {
  std::mt19937_64 rng(2);
  const FeatureMap f = random_map(rng, 2, 6, 9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 500; ++t) {
    const double y = static_cast<double>(t % 6);
    const double x0 = static_cast<double>(t % 8);
    const double a = u(rng), b = u(rng);
    const double xa = x0 + std::min(a, b), xb = x0 + std::max(a, b), xm = (xa + xb) / 2;
    const auto va = bilinear_sample(f, xa, y), vb = bilinear_sample(f, xb, y), vm = bilinear_sample(f, xm, y);
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(vm[c], (va[c] + vb[c]) / 2, 1e-12);
  }
}

TEST(ExtractRoi, ConstantMap) {
  FeatureMap f(3, 10, 25);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < 250; ++i) f.values[c * 250 + i] = 1.5 + static_cast<double>(c);
  }
  const YGrid g(72, 590);
  PoolConfig cfg;
  cfg.n_sample_points = 36;
  const std::vector<FeatureMap> maps{f};
  const ROIFeature roi = extract_roi_feature(maps, vertical_prior(400, 72), g, cfg);
  ASSERT_EQ(roi.channels, 3u);
  ASSERT_EQ(roi.n_points, 36u);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 36; ++j) EXPECT_DOUBLE_EQ(roi.at(c, j), 1.5 + static_cast<double>(c));
  }
}

TEST(ExtractRoi, LevelsConcatenate) {
  std::mt19937_64 rng(3);
  const std::vector<FeatureMap> maps{random_map(rng, 4, 10, 25), random_map(rng, 4, 20, 50)};
  const YGrid g(72, 590);
  const PoolConfig cfg;
  const ROIFeature both = extract_roi_feature(maps, vertical_prior(400, 72), g, cfg);
  EXPECT_EQ(both.channels, 8u);
  const ROIFeature first = extract_roi_feature(std::span(maps).first(1), vertical_prior(400, 72), g, cfg);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < cfg.n_sample_points; ++j) EXPECT_EQ(both.at(c, j), first.at(c, j));
  }
}

TEST(ExtractRoi, TwoPointsHitTopAndBottom) {
  FeatureMap f(1, 2, 3);
  f.values = {5, 5, 5, 7, 7, 7};
  const YGrid g(72, 590);
  PoolConfig cfg;
  cfg.n_sample_points = 2;
  cfg.image_width = 1640;
  const std::vector<FeatureMap> maps{f};
  const ROIFeature roi = extract_roi_feature(maps, vertical_prior(820, 72), g, cfg);
  EXPECT_DOUBLE_EQ(roi.at(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(roi.at(0, 1), 7.0);
}

TEST(ExtractRoi, EmptyLaneAndShapeErrors) {
  const YGrid g(72, 590);
  const std::vector<FeatureMap> maps{FeatureMap(2, 4, 4, 1.0)};
  LanePrior p = vertical_prior(10, 72);
  p.length = 0;
  try {
    extract_roi_feature(maps, p, g, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyLane);
  }
  const std::vector<FeatureMap> mixed{FeatureMap(2, 4, 4), FeatureMap(3, 4, 4)};
  try {
    extract_roi_feature(mixed, vertical_prior(10, 72), g, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(Attention, IdenticalColumnsGiveUniformWeights) {
  const std::vector<double> v{0.3, -1.2, 2.0};
  const std::size_t m = 5;
  std::vector<double> xf(3 * m);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < m; ++j) xf[c * m + j] = v[c];
  }
  const std::vector<double> xp{1, 2, 3};
  const auto r = roi_attention(xp, xf, 3, m);
  for (double a : r.attention) EXPECT_NEAR(a, 0.2, 1e-15);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_NEAR(r.aggregated[c], v[c], 1e-15);
    EXPECT_NEAR(r.out[c], xp[c] + v[c], 1e-15);
  }
}

TEST(Attention, SingleColumn) {
  const std::vector<double> xp{1, 2}, xf{4, 5};
  const auto r = roi_attention(xp, xf, 2, 1);
  EXPECT_EQ(r.attention, std::vector<double>{1.0});
  EXPECT_EQ(r.aggregated, (std::vector<double>{4, 5}));
}

TEST(Attention, TwoByTwoHandValue) {
  const std::vector<double> xp{1, 0};
  const std::vector<double> xf{1, 0, 0, 1};  // columns (1,0) and (0,1)
  const auto r = roi_attention(xp, xf, 2, 2);
  const double a0 = 1.0 / (1.0 + std::exp(-1.0 / std::numbers::sqrt2));
  EXPECT_NEAR(r.attention[0], a0, 1e-15);
  EXPECT_NEAR(r.attention[0], 0.66976, 1e-5);
  EXPECT_NEAR(r.attention[1], 0.33024, 1e-5);
  EXPECT_NEAR(r.aggregated[0], a0, 1e-15);
  EXPECT_NEAR(r.aggregated[1], 1 - a0, 1e-15);
}

TEST(Attention, Properties) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> uc(1, 16), um(1, 300);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 500; ++t) {
    const std::size_t c = uc(rng), m = um(rng);
    std::vector<double> xp(c), xf(c * m);
    for (double& v : xp) v = u(rng);
    for (double& v : xf) v = u(rng);
    const auto r = roi_attention(xp, xf, c, m);
    double total = 0;
    for (double a : r.attention) {
      EXPECT_GT(a, 0.0);
      EXPECT_LE(a, 1.0);
      total += a;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    for (std::size_t k = 0; k < c; ++k) {
      const auto row = std::span(xf).subspan(k * m, m);
      const double lo = *std::min_element(row.begin(), row.end());
      const double hi = *std::max_element(row.begin(), row.end());
      EXPECT_GE(r.aggregated[k], lo - 1e-12);
      EXPECT_LE(r.aggregated[k], hi + 1e-12);
    }
  }
}

TEST(Softmax, ShiftInvariant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10, 10), us(-100, 100);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> l(1 + static_cast<std::size_t>(t % 40));
    for (double& v : l) v = u(rng);
    const double shift = us(rng);
    std::vector<double> s = l;
    for (double& v : s) v += shift;
    const auto a = softmax(l), b = softmax(s);
    for (std::size_t i = 0; i < l.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(Resize, CornersAligned) {
  std::mt19937_64 rng(7);
  const FeatureMap f = random_map(rng, 2, 20, 50);
  const FeatureMap r = resize_bilinear(f, 10, 25);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(r.at(c, 0, 0), f.at(c, 0, 0));
    EXPECT_EQ(r.at(c, 9, 24), f.at(c, 19, 49));
  }
}

GatherWeights zero_weights(std::size_t c, std::size_t c_in, std::size_t np, std::vector<double> bias) {
  return {Tensor{{c, c_in, 9}, std::vector<double>(c * c_in * 9, 0.0)},
          Tensor{{c, c * np}, std::vector<double>(c * c * np, 0.0)}, Tensor{{c}, std::move(bias)}};
}

TEST(Forward, ZeroWeightsReduceToBias) {
  std::mt19937_64 rng(8);
  const std::vector<FeatureMap> maps{random_map(rng, 4, 20, 50)};
  const YGrid g(72, 590);
  PoolConfig cfg;
  cfg.channels = 4;
  const std::vector<double> b{0.5, -1, 2, 0.25};
  const auto out = roigather_forward(maps, vertical_prior(600, 72), g, cfg, zero_weights(4, 4, 36, b));
  const FeatureMap ctx = resize_bilinear(maps[0], 10, 25);
  const auto expect = roi_attention(b, ctx.values, 4, 250);
  ASSERT_EQ(out.size(), 4u);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(out[c], expect.out[c]);
}

TEST(Forward, ShapeMismatchIsConfigError) {
  const std::vector<FeatureMap> maps{FeatureMap(4, 20, 50, 1.0), FeatureMap(4, 10, 25, 1.0)};
  const YGrid g(72, 590);
  const PoolConfig cfg;
  // Two levels need 8 input channels.
  try {
    roigather_forward(maps, vertical_prior(600, 72), g, cfg, zero_weights(4, 4, 36, {0, 0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  auto w = zero_weights(4, 8, 36, {0, 0, 0});
  w.fc_bias.dims = {3};
  EXPECT_THROW(roigather_forward(maps, vertical_prior(600, 72), g, cfg, w), Error);
}

TEST(Golden, BitStableOutput) {
  const TensorFile file = read_tensor_file(LANEBENCH_TEST_DATA "/roigather_golden.lbgw");
  const auto c = testing::golden_case_from_file(file);
  const Tensor& expected = file.get("expected_out");
  const auto first = roigather_forward(c.fmaps, c.prior, c.grid, c.pool, c.weights);
  const auto second = roigather_forward(c.fmaps, c.prior, c.grid, c.pool, c.weights);
  ASSERT_EQ(first.size(), expected.values.size());
  EXPECT_EQ(std::memcmp(first.data(), expected.values.data(), first.size() * sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(first.data(), second.data(), first.size() * sizeof(double)), 0);
}

}  // namespace
}  // namespace lanebench
