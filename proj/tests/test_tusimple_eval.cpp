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

#include <gtest/gtest.h>

#include "lanebench/bench_io.hpp"
#include "lanebench/error.hpp"
#include "lanebench/evaluator.hpp"

namespace lanebench {
namespace {

TusimpleRecord two_lane_gt() {
  TusimpleRecord r;
  r.raw_file = "clips/0530/1.jpg";
  for (int i = 0; i < 10; ++i) r.h_samples.push_back(300 + 10 * i);
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back(400 - 5 * i);
    b.push_back(800 + 5 * i);
  }
  r.lanes = {a, b};
  return r;
}

TEST(TusimpleMetrics, PerfectPrediction) {
  const auto gt = two_lane_gt();
  const TusimpleMetrics m = tusimple_metrics({gt}, {gt});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.fp_rate, 0.0);
  EXPECT_EQ(m.fn_rate, 0.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(TusimpleMetrics, NoPredictions) {
  const TusimpleMetrics m = tusimple_metrics({two_lane_gt()}, {});
  EXPECT_EQ(m.accuracy, 0.0);
  EXPECT_EQ(m.fp_rate, 0.0);
  EXPECT_EQ(m.fn_rate, 1.0);
}

TEST(TusimpleMetrics, HalfShiftedLane) {
  const auto gt = two_lane_gt();
  TusimpleRecord pred = gt;
  for (int i = 0; i < 5; ++i) pred.lanes[1][static_cast<std::size_t>(i)] += 25;
  // Hand count: lane 0 has 10 of 10 correct points, lane 1 has 5 of 10.
  // Lane 1 falls below 0.85 and counts as a wrong prediction and a miss.
  const TusimpleMetrics m = tusimple_metrics({gt}, {pred});
  EXPECT_EQ(m.gt_points, 20u);
  EXPECT_EQ(m.correct_points, 15u);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(m.fp_rate, 0.5);
  EXPECT_DOUBLE_EQ(m.fn_rate, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 0.5);
}

TEST(TusimpleMetrics, ToleranceIsStrict) {
  const auto gt = two_lane_gt();
  TusimpleRecord pred = gt;
  for (double& x : pred.lanes[0]) x += 19.9;
  for (double& x : pred.lanes[1]) x += 20.0;
  const TusimpleMetrics m = tusimple_metrics({gt}, {pred});
  EXPECT_EQ(m.correct_points, 10u);
  EXPECT_EQ(m.wrong_preds, 1u);
}

TEST(TusimpleMetrics, MissingPointsAndExtraLanes) {
  auto gt = two_lane_gt();
  gt.lanes[1][0] = kTusimpleMissing;  // 19 gt points
  TusimpleRecord pred = gt;
  pred.lanes.push_back(std::vector<double>(10, 100.0));  // unmatched extra lane
  const TusimpleMetrics m = tusimple_metrics({gt}, {pred});
  EXPECT_EQ(m.gt_points, 19u);
  EXPECT_EQ(m.correct_points, 19u);
  EXPECT_EQ(m.pred_lanes, 3u);
  EXPECT_EQ(m.wrong_preds, 1u);
  EXPECT_EQ(m.missed_gts, 0u);
  EXPECT_DOUBLE_EQ(m.fp_rate, 1.0 / 3.0);
}

TEST(TusimpleMetrics, DanglingKey) {
  auto pred = two_lane_gt();
  pred.raw_file = "other.jpg";
  EXPECT_THROW(tusimple_metrics({two_lane_gt()}, {pred}), DanglingPredictionError);
}

}  // namespace
}  // namespace lanebench
