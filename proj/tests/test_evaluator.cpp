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

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "lanebench/error.hpp"
#include "lanebench/evaluator.hpp"
#include "lanebench/synth.hpp"
#include "metric_tables.hpp"
#include "test_util.hpp"

namespace lanebench {
namespace {

using testing::constant_lane;
using testing::shifted;

using testing::kRadius10;
using testing::kRadius20;
using testing::TableRow;

void check_table(const std::vector<TableRow>& rows, double mean_f1, MatchCounts totals, double mean_p,
                 double mean_r) {
  std::vector<double> thr;
  std::vector<MatchCounts> counts;
  for (const auto& r : rows) {
    thr.push_back(r.iou);
    counts.push_back({r.tp, r.fp, r.fn});
    const Prf prf = f1_from_counts({r.tp, r.fp, r.fn});
    EXPECT_NEAR(prf.precision, r.precision, 5e-4) << r.iou;
    EXPECT_NEAR(prf.recall, r.recall, 5e-4) << r.iou;
    EXPECT_NEAR(prf.f1, r.f1, 5e-4) << r.iou;
  }
  const MetricTable t = build_metric_table(thr, counts, 0);
  EXPECT_NEAR(t.mf1, mean_f1, 5e-4);
  EXPECT_EQ(t.totals, totals);
  EXPECT_NEAR(t.totals_prf.precision, mean_p, 5e-4);
  EXPECT_NEAR(t.totals_prf.recall, mean_r, 5e-4);
  ASSERT_TRUE(t.f1_at_50 && t.f1_at_75);
  EXPECT_NEAR(*t.f1_at_50, rows[0].f1, 5e-4);
  EXPECT_NEAR(*t.f1_at_75, rows[5].f1, 5e-4);
}

TEST(MetricTable, RadiusTenTable) { check_table(kRadius10, 0.5543, {534334, 344736, 514526}, 0.6078, 0.50944); }

TEST(MetricTable, RadiusTwentyTable) { check_table(kRadius20, 0.5521, {537145, 359725, 511715}, 0.5989, 0.512); }

TEST(F1, Conventions) {
  const Prf zero = f1_from_counts({0, 0, 0});
  EXPECT_EQ(zero.precision, 0.0);
  EXPECT_EQ(zero.recall, 0.0);
  EXPECT_EQ(zero.f1, 0.0);
  EXPECT_EQ(f1_from_counts({0, 5, 3}).f1, 0.0);
  const Prf even = f1_from_counts({30, 10, 10});
  EXPECT_DOUBLE_EQ(even.f1, even.precision);
}

TEST(MergeCounts, MonoidLaws) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::uint64_t> u(0, 1000000);
  for (int t = 0; t < 200; ++t) {
    const MatchCounts a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
    EXPECT_EQ(merge_counts(a, {}), a);
    EXPECT_EQ(merge_counts(a, b), merge_counts(b, a));
    EXPECT_EQ(merge_counts(merge_counts(a, b), c), merge_counts(a, merge_counts(b, c)));
  }
}

TEST(MatchLanes, Examples) {
  EXPECT_EQ(match_lanes(Matrix(3, 0), 0.5), (MatchCounts{0, 0, 3}));
  EXPECT_EQ(match_lanes(Matrix(0, 2), 0.5), (MatchCounts{0, 2, 0}));
  Matrix diag(3, 4, 0.1);
  for (std::size_t i = 0; i < 3; ++i) diag(i, i) = 0.9;
  EXPECT_EQ(match_lanes(diag, 0.5), (MatchCounts{3, 1, 0}));
  const Matrix m{{0.6, 0.55}, {0.58, 0.2}};
  EXPECT_EQ(match_lanes(m, 0.5), (MatchCounts{2, 0, 0}));
  EXPECT_EQ(matched_pairs(m, 0.5), (std::vector<std::pair<int, int>>{{0, 1}, {1, 0}}));
}

TEST(MatchLanes, TieBreakPrefersLargerIouSum) {
  const Matrix m{{0.9, 0.6}, {0.6, 0.9}};
  EXPECT_EQ(matched_pairs(m, 0.5), (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
}

std::uint64_t brute_max_matching(const Matrix& m, double tau) {
  const std::size_t g = m.rows(), p = m.cols();
  std::uint64_t best = 0;
  // Assign each gt to a distinct pred or to nothing.
  std::vector<int> choice(g, -1);
  std::vector<char> used(p, 0);
  auto rec = [&](auto&& self, std::size_t i, std::uint64_t count) -> void {
    if (i == g) {
      best = std::max(best, count);
      return;
    }
    self(self, i + 1, count);
    for (std::size_t k = 0; k < p; ++k) {
      if (used[k] || m(i, k) < tau) continue;
      used[k] = 1;
      self(self, i + 1, count + 1);
      used[k] = 0;
    }
  };
  rec(rec, 0, 0);
  return best;
}

TEST(MatchLanes, MaximumCardinality) {
  std::mt19937_64 rng(72);
  std::uniform_int_distribution<int> dim(0, 5);
  std::uniform_real_distribution<double> u(0, 1);
  for (double tau : {0.5, 0.75}) {
    for (int t = 0; t < 500; ++t) {
      Matrix m(static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)));
      for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = u(rng);
      }
      const MatchCounts c = match_lanes(m, tau);
      EXPECT_EQ(c.tp, brute_max_matching(m, tau));
      EXPECT_EQ(c.fp, m.cols() - c.tp);
      EXPECT_EQ(c.fn, m.rows() - c.tp);
    }
  }
}

TEST(Thresholds, Parsing) {
  const auto t = parse_thresholds("0.5:0.05:0.95");
  EXPECT_EQ(t, default_thresholds());
  EXPECT_EQ(parse_thresholds("0.5,0.75"), (std::vector<double>{0.5, 0.75}));
  EXPECT_THROW(parse_thresholds("0.75,0.5"), Error);
  EXPECT_THROW(parse_thresholds("0:0.5:1"), Error);
  EXPECT_THROW(parse_thresholds("abc"), Error);
}

EvalConfig cfg_with(IouBackend b) {
  EvalConfig cfg;
  cfg.backend = b;
  return cfg;
}

std::vector<EvalImage> synthetic(int n, double sigma, double drop, std::uint64_t seed, bool categories = false) {
  SynthConfig sc;
  sc.images = n;
  sc.noise_sigma = sigma;
  sc.drop_prob = drop;
  sc.seed = seed;
  sc.with_categories = categories;
  return synthetic_eval_images(generate_synthetic(sc), EvalConfig{}.grid());
}

TEST(Backends, AgreeAtExtremes) {
  const Lane a = constant_lane(72, 600);
  for (IouBackend b : {IouBackend::kMask, IouBackend::kLIoU}) {
    const EvalConfig cfg = cfg_with(b);
    EXPECT_DOUBLE_EQ(pairwise_iou({a}, {a}, cfg)(0, 0), 1.0);
    const double sep = 2 * std::max(cfg.radius_e, cfg.mask_width);
    EXPECT_DOUBLE_EQ(pairwise_iou({a}, {shifted(a, sep)}, cfg)(0, 0), 0.0);
  }
}

TEST(Backends, MaskOffsetFifteen) {
  const Lane a = constant_lane(72, 600);
  EXPECT_NEAR(lane_mask_iou(a, shifted(a, 15), EvalConfig{}), 1.0 / 3.0, 0.02);
}

TEST(EvaluateDataset, PerfectAndEmpty) {
  const auto images = synthetic(20, 0, 0, 1);
  std::map<std::string, std::vector<Lane>> gt;
  std::map<std::string, std::vector<ScoredLane>> pred;
  std::uint64_t gt_lanes = 0;
  for (const auto& img : images) {
    gt[img.key] = img.gt;
    gt_lanes += img.gt.size();
    for (const auto& l : img.gt) pred[img.key].push_back({l, 1.0});
  }
  for (IouBackend b : {IouBackend::kMask, IouBackend::kLIoU}) {
    const EvalReport r = evaluate_dataset(gt, pred, nullptr, cfg_with(b));
    for (const auto& row : r.overall.rows) EXPECT_EQ(row.prf.f1, 1.0);
    EXPECT_EQ(r.overall.mf1, 1.0);
    const EvalReport empty = evaluate_dataset(gt, {}, nullptr, cfg_with(b));
    for (const auto& row : empty.overall.rows) {
      EXPECT_EQ(row.prf.f1, 0.0);
      EXPECT_EQ(row.counts.fn, gt_lanes);
    }
  }
}

TEST(EvaluateDataset, DanglingPrediction) {
  std::map<std::string, std::vector<Lane>> gt{{"a", {constant_lane(72, 5)}}};
  std::map<std::string, std::vector<ScoredLane>> pred{{"b", {{constant_lane(72, 5), 1.0}}}};
  try {
    evaluate_dataset(gt, pred, nullptr, EvalConfig{});
    FAIL();
  } catch (const DanglingPredictionError& e) {
    EXPECT_EQ(e.keys(), std::vector<std::string>{"b"});
    EXPECT_EQ(e.kind(), ErrorKind::kDanglingPrediction);
  }
}

TEST(EvaluateDataset, LIoUBackendAtTwoE) {
  std::map<std::string, std::vector<Lane>> gt;
  std::map<std::string, std::vector<ScoredLane>> pred;
  for (int i = 0; i < 5; ++i) {
    const Lane g = constant_lane(72, 300.0 + 200 * i);
    gt["k" + std::to_string(i)] = {g};
    pred["k" + std::to_string(i)] = {{shifted(g, 30), 1.0}};
    EXPECT_EQ(pairwise_iou({g}, {shifted(g, 30)}, cfg_with(IouBackend::kLIoU))(0, 0), 0.0);
  }
  const EvalReport r = evaluate_dataset(gt, pred, nullptr, cfg_with(IouBackend::kLIoU));
  for (const auto& row : r.overall.rows) EXPECT_EQ(row.prf.f1, 0.0);
}

TEST(EvaluateImages, ThresholdMonotonicity) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> us(0, 30), ud(0, 0.5);
  int evaluations = 0;
  for (int t = 0; t < 100; ++t) {
    const auto images = synthetic(3, us(rng), ud(rng), 1000 + static_cast<std::uint64_t>(t));
    for (IouBackend b : {IouBackend::kMask, IouBackend::kLIoU}) {
      const EvalReport r = evaluate_images(images, cfg_with(b));
      for (std::size_t k = 1; k < r.overall.rows.size(); ++k) {
        EXPECT_LE(r.overall.rows[k].counts.tp, r.overall.rows[k - 1].counts.tp);
        EXPECT_LE(r.overall.rows[k].prf.f1, r.overall.rows[k - 1].prf.f1);
      }
      ++evaluations;
    }
  }
  EXPECT_EQ(evaluations, 200);
}

TEST(EvaluateImages, ReportSelfConsistency) {
  const auto images = synthetic(60, 12, 0.2, 9, true);
  const EvalReport r = evaluate_images(images, EvalConfig{});
  auto check = [](const MetricTable& t) {
    MatchCounts sum;
    double f1_sum = 0;
    for (const auto& row : t.rows) {
      const Prf p = f1_from_counts(row.counts);
      EXPECT_NEAR(p.precision, row.prf.precision, 1e-12);
      EXPECT_NEAR(p.recall, row.prf.recall, 1e-12);
      EXPECT_NEAR(p.f1, row.prf.f1, 1e-12);
      sum = merge_counts(sum, row.counts);
      f1_sum += row.prf.f1;
    }
    EXPECT_EQ(sum, t.totals);
    EXPECT_NEAR(t.mf1, f1_sum / static_cast<double>(t.rows.size()), 1e-12);
  };
  check(r.overall);
  ASSERT_EQ(r.categories.size(), 9u);
  std::uint64_t images_in_categories = 0;
  for (const auto& [c, t] : r.categories) {
    check(t);
    images_in_categories += t.images;
  }
  EXPECT_EQ(images_in_categories, 60u);
}

TEST(EvaluateImages, CrossFalsePositives) {
  EvalImage cross{"x", {}, {constant_lane(72, 100), constant_lane(72, 900)}, Category::kCross};
  EvalImage normal{"n", {constant_lane(72, 100)}, {constant_lane(72, 100), constant_lane(72, 500)},
                   Category::kNormal};
  const std::vector<EvalImage> images{cross, normal};
  const EvalReport r = evaluate_images(images, EvalConfig{});
  EXPECT_EQ(r.cross_fp, 2u);
  EXPECT_EQ(r.overall.rows[0].counts, (MatchCounts{1, 3, 0}));
}

TEST(EvaluateImages, MergedPerImageCountsEqualDatasetCounts) {
  const auto images = synthetic(40, 15, 0.1, 5);
  const EvalConfig cfg;
  std::vector<MatchCounts> merged(cfg.thresholds.size());
  for (const auto& img : images) {
    const auto c = evaluate_image(img, cfg);
    for (std::size_t k = 0; k < c.size(); ++k) merged[k] = merge_counts(merged[k], c[k]);
  }
  const EvalReport r = evaluate_images(images, cfg);
  for (std::size_t k = 0; k < merged.size(); ++k) EXPECT_EQ(r.overall.rows[k].counts, merged[k]);
}

TEST(EvaluateImages, ParallelMatchesSerialAndReference) {
  const auto images = synthetic(80, 10, 0.15, 6, true);
  for (IouBackend b : {IouBackend::kMask, IouBackend::kLIoU}) {
    const EvalConfig cfg = cfg_with(b);
    const std::string one = report_to_json(evaluate_images(images, cfg, 1), cfg);
    EXPECT_EQ(one, report_to_json(evaluate_images(images, cfg, 4), cfg));
    EXPECT_EQ(one, report_to_json(evaluate_images_reference(images, cfg), cfg));
  }
}

TEST(Report, JsonAndCsvShape) {
  const auto images = synthetic(10, 5, 0, 7, true);
  const EvalConfig cfg;
  const EvalReport r = evaluate_images(images, cfg);
  const auto doc = nlohmann::json::parse(report_to_json(r, cfg));
  EXPECT_EQ(doc["schema"], "lanebench.eval_report");
  EXPECT_EQ(doc["version"], kReportSchemaVersion);
  EXPECT_EQ(doc["thresholds"].size(), 10u);
  EXPECT_TRUE(doc.contains("totals"));
  EXPECT_TRUE(doc.contains("categories"));
  EXPECT_FALSE(doc["config"].contains("jobs"));
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iou,f1,tp,fp,fn,precision,recall");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST(EvalConfig, Validation) {
  EvalConfig cfg;
  cfg.mask_width = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = EvalConfig{};
  cfg.thresholds = {0.5, 0.5};
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_THROW(evaluate_images({}, EvalConfig{}, 0), Error);
}

}  // namespace
}  // namespace lanebench
