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
#include <filesystem>

#include <gtest/gtest.h>

#include "lanebench/culane_dataset.hpp"
#include "lanebench/error.hpp"
#include "lanebench/synth.hpp"

namespace fs = std::filesystem;

namespace lanebench {
namespace {

TEST(SynthRng, NormalMoments) {
  SynthRng rng(1);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(0, 1);
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(SynthRng, UniformRange) {
  SynthRng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(3, 5);
    EXPECT_GE(u, 3);
    EXPECT_LT(u, 5);
  }
}

TEST(Synth, Validation) {
  SynthConfig c;
  c.images = 0;
  EXPECT_THROW(validate_synth_config(c), Error);
  c = {};
  c.drop_prob = 1.0;
  EXPECT_THROW(validate_synth_config(c), Error);
  c = {};
  c.noise_sigma = -1;
  EXPECT_THROW(validate_synth_config(c), Error);
}

TEST(Synth, SameSeedSameImages) {
  SynthConfig c;
  c.images = 30;
  c.noise_sigma = 7;
  c.drop_prob = 0.3;
  c.seed = 99;
  const auto a = generate_synthetic(c), b = generate_synthetic(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].pred.size(), b[i].pred.size());
    for (std::size_t k = 0; k < a[i].pred.size(); ++k) {
      for (std::size_t j = 0; j < a[i].pred[k].size(); ++j) EXPECT_EQ(a[i].pred[k][j].x, b[i].pred[k][j].x);
    }
  }
  c.seed = 100;
  EXPECT_NE(generate_synthetic(c)[0].gt[0][0].x, a[0].gt[0][0].x);
}

TEST(Synth, LanesStayOnCanvas) {
  SynthConfig c;
  c.images = 100;
  for (const auto& img : generate_synthetic(c)) {
    EXPECT_EQ(img.gt.size(), 4u);
    for (const auto& lane : img.gt) {
      EXPECT_GE(lane.size(), 2u);
      for (const auto& p : lane) {
        EXPECT_GE(p.y, 0);
        EXPECT_LE(p.y, c.canvas.height);
      }
    }
  }
}

TEST(Synth, NoiselessPredictionsArePerfect) {
  SynthConfig c;
  c.images = 50;
  c.with_categories = true;
  for (IouBackend b : {IouBackend::kMask, IouBackend::kLIoU}) {
    EvalConfig cfg;
    cfg.backend = b;
    const EvalReport r = evaluate_images(synthetic_eval_images(generate_synthetic(c), cfg.grid()), cfg);
    for (const auto& row : r.overall.rows) EXPECT_EQ(row.prf.f1, 1.0);
    EXPECT_EQ(r.cross_fp, 0u);
  }
}

TEST(Synth, MoreNoiseLowersF1) {
  auto f1_at_50 = [](double sigma) {
    SynthConfig c;
    c.images = 200;
    c.noise_sigma = sigma;
    c.seed = 5;
    const EvalConfig cfg;
    return *evaluate_images(synthetic_eval_images(generate_synthetic(c), cfg.grid()), cfg).overall.f1_at_50;
  };
  EXPECT_LT(f1_at_50(40), f1_at_50(5));
}

TEST(Synth, TreeRoundTripsThroughLoader) {
  const fs::path dir = fs::temp_directory_path() / "lanebench_synth_tree";
  fs::remove_all(dir);
  SynthConfig c;
  c.images = 12;
  c.with_categories = true;
  const auto images = generate_synthetic(c);
  write_synthetic_tree(images, c, dir);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const EvalConfig cfg;
  const CulaneDataset ds =
      load_culane_dataset({dir / "gt", dir / "pred", dir / "list.txt", dir / "categories"}, cfg.grid());
  EXPECT_EQ(ds.gt.size(), 12u);
  EXPECT_EQ(ds.categories.size(), 12u);
  EXPECT_EQ(ds.categories.at("synth/00008"), Category::kCross);
  const EvalReport r = evaluate_dataset(ds.gt, ds.pred, &ds.categories, cfg);
  EXPECT_EQ(r.overall.mf1, 1.0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace lanebench
