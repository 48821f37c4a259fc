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

#include "lanebench/liou.hpp"

#include <algorithm>
#include <cmath>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {

void check_config(const LIoUConfig& cfg) {
  if (!(cfg.radius_e > 0.0) || !std::isfinite(cfg.radius_e)) {
    throw_invalid("LIoU radius must be positive");
  }
}

void check_pair(const Lane& pred, const Lane& gt) {
  if (pred.size() != gt.size()) throw_invalid("lanes are on different grids");
}

// Rows that enter the sums. Rows valid in only one lane contribute constants
// (union_penalized) and carry no gradient.
struct Domain {
  int common_begin = 0;
  int common_end = 0;
  int exclusive_rows = 0;
};

Domain contributing_domain(const Lane& pred, const Lane& gt, ValidityMode mode) {
  Domain d;
  d.common_begin = std::max(pred.valid_begin(), gt.valid_begin());
  d.common_end = std::max(d.common_begin, std::min(pred.valid_end(), gt.valid_end()));
  if (mode == ValidityMode::kUnionPenalized) {
    const int common = d.common_end - d.common_begin;
    d.exclusive_rows = pred.valid_count() + gt.valid_count() - 2 * common;
  }
  if (d.common_end == d.common_begin && d.exclusive_rows == 0) {
    throw Error(ErrorKind::kNoOverlapDomain, "no row contributes to the line IoU");
  }
  return d;
}

struct Sums {
  double overlap = 0.0;
  double union_ = 0.0;
};

Sums accumulate(const Lane& pred, const Lane& gt, const LIoUConfig& cfg, const Domain& d) {
  const bool squared = cfg.variant == LIoUVariant::kSquared;
  Sums s;
  for (int i = d.common_begin; i < d.common_end; ++i) {
    const SegmentOverlap seg = segment_overlap(pred.x(i), gt.x(i), cfg.radius_e);
    s.overlap += squared ? seg.overlap * seg.overlap : seg.overlap;
    s.union_ += squared ? seg.union_ * seg.union_ : seg.union_;
  }
  const double lone_union = 2.0 * cfg.radius_e;
  s.union_ += d.exclusive_rows * (squared ? lone_union * lone_union : lone_union);
  return s;
}

}  // namespace

SegmentOverlap segment_overlap(double x_pred, double x_gt, double radius_e) {
  if (!std::isfinite(x_pred) || !std::isfinite(x_gt) || !std::isfinite(radius_e)) {
    throw_invalid("segment_overlap needs finite inputs");
  }
  if (!(radius_e > 0.0)) throw_invalid("LIoU radius must be positive");
  SegmentOverlap s;
  s.overlap = std::min(x_pred + radius_e, x_gt + radius_e) - std::max(x_pred - radius_e, x_gt - radius_e);
  s.union_ = std::max(x_pred + radius_e, x_gt + radius_e) - std::min(x_pred - radius_e, x_gt - radius_e);
  return s;
}

double liou(const Lane& pred, const Lane& gt, const LIoUConfig& cfg) {
  check_config(cfg);
  check_pair(pred, gt);
  const Domain d = contributing_domain(pred, gt, cfg.validity);
  const Sums s = accumulate(pred, gt, cfg, d);
  return s.overlap / s.union_;
}

double liou_loss(const Lane& pred, const Lane& gt, const LIoUConfig& cfg) {
  return 1.0 - liou(pred, gt, cfg);
}

std::vector<double> liou_grad(const Lane& pred, const Lane& gt, const LIoUConfig& cfg) {
  check_config(cfg);
  check_pair(pred, gt);
  const Domain d = contributing_domain(pred, gt, cfg.validity);
  const Sums s = accumulate(pred, gt, cfg, d);
  const bool squared = cfg.variant == LIoUVariant::kSquared;

  std::vector<double> grad(static_cast<std::size_t>(pred.size()), 0.0);
  const double inv_u2 = 1.0 / (s.union_ * s.union_);
  for (int i = d.common_begin; i < d.common_end; ++i) {
    const double diff = pred.x(i) - gt.x(i);
    if (diff == 0.0) {
      throw Error(ErrorKind::kKinkPoint,
                  "line IoU is not differentiable at row " + std::to_string(i));
    }
    const double sign = diff > 0.0 ? 1.0 : -1.0;
    double d_overlap = -sign;
    double d_union = sign;
    if (squared) {
      const SegmentOverlap seg = segment_overlap(pred.x(i), gt.x(i), cfg.radius_e);
      d_overlap *= 2.0 * seg.overlap;
      d_union *= 2.0 * seg.union_;
    }
    // loss = 1 - O/U  =>  dloss = -(dO * U - O * dU) / U^2
    grad[static_cast<std::size_t>(i)] = -(d_overlap * s.union_ - s.overlap * d_union) * inv_u2;
  }
  return grad;
}

}  // namespace lanebench
