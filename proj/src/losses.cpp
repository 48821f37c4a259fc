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

#include "lanebench/losses.hpp"

#include <algorithm>
#include <cmath>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {
constexpr double kProbEps = 1e-7;
}

void validate_weights(const LossWeights& w) {
  if (!(w.w_cls >= 0.0 && w.w_xytl >= 0.0 && w.w_liou >= 0.0 && w.w_sim >= 0.0)) {
    throw_invalid("loss weights must be non-negative");
  }
}

double focal_loss(double p_fg, bool is_positive, double alpha, double gamma) {
  if (!(p_fg >= 0.0 && p_fg <= 1.0)) throw_invalid("focal_loss probability outside [0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw_invalid("focal_loss alpha outside [0, 1]");
  if (!(gamma >= 0.0)) throw_invalid("focal_loss gamma must be non-negative");
  const double p = std::clamp(p_fg, kProbEps, 1.0 - kProbEps);
  const double p_t = is_positive ? p : 1.0 - p;
  const double alpha_t = is_positive ? alpha : 1.0 - alpha;
  return -alpha_t * std::pow(1.0 - p_t, gamma) * std::log(p_t);
}

double smooth_l1(double pred, double target, double beta) {
  if (!(beta > 0.0)) throw_invalid("smooth_l1 beta must be positive");
  if (!std::isfinite(pred) || !std::isfinite(target)) throw_invalid("smooth_l1 needs finite inputs");
  const double diff = std::abs(pred - target);
  return diff < beta ? 0.5 * diff * diff / beta : diff - 0.5 * beta;
}

double xytl_loss(const LanePrior& pred, const LanePrior& target, double beta) {
  const double sum = smooth_l1(pred.start_x, target.start_x, beta) +
                     smooth_l1(pred.start_y, target.start_y, beta) +
                     smooth_l1(pred.theta, target.theta, beta) +
                     smooth_l1(pred.length, target.length, beta);
  return sum / 4.0;
}

double total_loss(double l_cls, double l_xytl, double l_liou, const LossWeights& w) {
  if (!(l_cls >= 0.0 && l_xytl >= 0.0 && l_liou >= 0.0)) {
    throw_invalid("loss components must be non-negative");
  }
  validate_weights(w);
  return w.w_cls * l_cls + w.w_xytl * l_xytl + w.w_liou * l_liou;
}

}  // namespace lanebench
