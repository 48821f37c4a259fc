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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanebench/bench_io.hpp"
#include "lanebench/lane_model.hpp"
#include "lanebench/liou.hpp"
#include "lanebench/matrix.hpp"
#include "lanebench/raster.hpp"

namespace lanebench {

enum class IouBackend { kMask, kLIoU };

const char* backend_name(IouBackend backend);
std::optional<IouBackend> parse_backend(std::string_view name);

// The nine CULane test categories, in report order.
enum class Category { kNormal, kCrowded, kDazzle, kShadow, kNoLine, kArrow, kCurve, kNight, kCross };

inline constexpr std::array<Category, 9> kAllCategories = {
    Category::kNormal, Category::kCrowded, Category::kDazzle, Category::kShadow, Category::kNoLine,
    Category::kArrow,  Category::kCurve,   Category::kNight,  Category::kCross};

const char* category_name(Category c);
// List-file name of the category in the public test split, e.g. "test7_cross.txt".
const char* category_list_file(Category c);

std::vector<double> default_thresholds();

// Parses "start:step:stop" (inclusive) or a comma-separated list.
std::vector<double> parse_thresholds(std::string_view spec);

struct EvalConfig {
  IouBackend backend = IouBackend::kMask;
  double mask_width = 30.0;
  double radius_e = 15.0;
  Canvas canvas{};
  int n_points = 72;
  std::vector<double> thresholds = default_thresholds();
  ValidityMode liou_validity = ValidityMode::kUnionPenalized;

  void validate() const;
  YGrid grid() const { return YGrid(n_points, canvas.height); }
};

struct MatchCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

MatchCounts merge_counts(const MatchCounts& a, const MatchCounts& b);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 ratios are 0.
Prf f1_from_counts(const MatchCounts& c);

// Maximum-cardinality matching over pairs with iou >= tau, ties broken by
// the largest total IoU. Rows are ground truth, columns predictions.
MatchCounts match_lanes(const Matrix& iou, double tau);

// Matched (gt, pred) pairs of the same matching.
std::vector<std::pair<int, int>> matched_pairs(const Matrix& iou, double tau);

struct ThresholdRow {
  double iou = 0.0;
  MatchCounts counts;
  Prf prf;
};

struct MetricTable {
  std::vector<ThresholdRow> rows;
  MatchCounts totals;  // column sums over rows
  Prf totals_prf;      // precision/recall of the summed counts
  double mf1 = 0.0;    // mean of the per-threshold F1 column
  std::optional<double> f1_at_50;
  std::optional<double> f1_at_75;
  std::uint64_t images = 0;
};

MetricTable build_metric_table(std::span<const double> thresholds, std::span<const MatchCounts> counts,
                               std::uint64_t images);

struct EvalReport {
  MetricTable overall;
  std::map<Category, MetricTable> categories;
  std::uint64_t cross_fp = 0;
};

struct EvalImage {
  std::string key;
  std::vector<Lane> gt;
  std::vector<Lane> pred;
  std::optional<Category> category;
};

// Pairwise IoU matrix (rows gt, cols pred) with the configured backend.
// LIoU values are clamped to [0, 1]; a pair without contributing rows is 0.
Matrix pairwise_iou(const std::vector<Lane>& gt, const std::vector<Lane>& pred, const EvalConfig& cfg);

double lane_mask_iou(const Lane& a, const Lane& b, const EvalConfig& cfg);

// Per-threshold counts of one image.
std::vector<MatchCounts> evaluate_image(const EvalImage& image, const EvalConfig& cfg);

// Data-parallel dataset pass (OpenMP, `jobs` workers) with an ordered
// reduction; the report is independent of `jobs`.
EvalReport evaluate_images(std::span<const EvalImage> images, const EvalConfig& cfg, int jobs = 1);

// Serial reference: full-canvas bitmap IoU for the mask backend and a plain
// loop over images. Kept for cross-checking evaluate_images.
EvalReport evaluate_images_reference(std::span<const EvalImage> images, const EvalConfig& cfg);

// Images are taken in key order. Throws DanglingPredictionError when a
// prediction key has no ground truth.
EvalReport evaluate_dataset(const std::map<std::string, std::vector<Lane>>& gt,
                            const std::map<std::string, std::vector<ScoredLane>>& pred,
                            const std::map<std::string, Category>* categories, const EvalConfig& cfg,
                            int jobs = 1);

// Report serialization. The JSON document carries no timestamps and no
// worker count, so identical inputs give byte-identical output.
inline constexpr int kReportSchemaVersion = 1;
std::string report_to_json(const EvalReport& report, const EvalConfig& cfg);
std::string report_to_csv(const EvalReport& report);

struct TusimpleMetrics {
  double accuracy = 0.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double f1 = 0.0;
  std::uint64_t gt_points = 0;
  std::uint64_t correct_points = 0;
  std::uint64_t gt_lanes = 0;
  std::uint64_t pred_lanes = 0;
  std::uint64_t wrong_preds = 0;
  std::uint64_t missed_gts = 0;
};

TusimpleMetrics tusimple_metrics(const std::vector<TusimpleRecord>& gt, const std::vector<TusimpleRecord>& pred,
                                 double point_tolerance = 20.0, double lane_correct_fraction = 0.85);

std::string tusimple_metrics_to_json(const TusimpleMetrics& m, double point_tolerance,
                                     double lane_correct_fraction);

}  // namespace lanebench
