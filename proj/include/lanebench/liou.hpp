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

#include "lanebench/lane_model.hpp"

namespace lanebench {

enum class LIoUVariant { kLinear, kSquared };

// common_only sums over rows valid in both lanes. union_penalized also counts
// rows valid in exactly one lane, each with zero overlap and union 2e.
enum class ValidityMode { kCommonOnly, kUnionPenalized };

struct LIoUConfig {
  double radius_e = 15.0;
  LIoUVariant variant = LIoUVariant::kLinear;
  ValidityMode validity = ValidityMode::kCommonOnly;
};

struct SegmentOverlap {
  double overlap = 0.0;  // d_o, negative when the extended segments are apart
  double union_ = 0.0;   // d_u
};

SegmentOverlap segment_overlap(double x_pred, double x_gt, double radius_e);

// Sum of overlaps over sum of unions. Throws kNoOverlapDomain when no row
// contributes under cfg.validity, kInvalidArgument on grid mismatch.
double liou(const Lane& pred, const Lane& gt, const LIoUConfig& cfg = {});

double liou_loss(const Lane& pred, const Lane& gt, const LIoUConfig& cfg = {});

// d(loss)/d(pred.x_i). Zero outside the contributing rows. Throws
// kKinkPoint when a contributing row has pred.x_i == gt.x_i exactly.
std::vector<double> liou_grad(const Lane& pred, const Lane& gt, const LIoUConfig& cfg = {});

}  // namespace lanebench
