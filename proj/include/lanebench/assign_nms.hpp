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
#include <functional>
#include <utility>
#include <vector>

#include "lanebench/lane_model.hpp"
#include "lanebench/liou.hpp"
#include "lanebench/losses.hpp"
#include "lanebench/matrix.hpp"

namespace lanebench {

// Additional non-negative cost terms (e.g. start-point or angle distance)
// added on top of the classification and LIoU similarity terms.
using ExtraCostFn = std::function<double(const LanePrior& prior, const Lane& prior_lane, const Lane& gt)>;

// w_cls * (1 - fg_prob) + w_sim * (1 - LIoU) / 2. A prior whose lane shares
// no contributing row with gt gets the worst similarity term.
double assignment_cost(const LanePrior& prior, const Lane& gt, const YGrid& grid,
                       const LossWeights& w, const LIoUConfig& liou_cfg,
                       const ExtraCostFn& extra = {});

// Number of priors a ground truth receives given its IoU row.
using DynamicKFn = std::function<int(std::span<const double> iou_row, int k_max)>;

// clamp(round(sum of the k_max largest IoUs), 1, k_max).
int dynamic_k_from_ious(std::span<const double> iou_row, int k_max);

struct AssignmentConfig {
  int k_max = 4;  // 1 selects one-to-one (Hungarian) assignment
  LossWeights weights;
  DynamicKFn dynamic_k = dynamic_k_from_ious;
};

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (gt_index, prior_index), sorted
  std::vector<int> unmatched_priors;       // ascending
};

Assignment dynamic_topk_assign(const Matrix& cost, const Matrix& iou, const AssignmentConfig& cfg);

// Greedy suppression in descending score order against already-kept lanes.
// Candidates whose overlap throws kNoOverlapDomain never suppress each other.
std::vector<ScoredLane> line_nms(const std::vector<ScoredLane>& candidates, double overlap_threshold,
                                 const LIoUConfig& liou_cfg, std::size_t keep_max = 4);

// Same greedy rule over an arbitrary symmetric overlap measure on indices.
// Returns the kept candidate indices in descending score order.
std::vector<std::size_t> greedy_nms(std::span<const double> scores, double overlap_threshold,
                                    std::size_t keep_max,
                                    const std::function<double(std::size_t, std::size_t)>& overlap);

}  // namespace lanebench
