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

#include "lanebench/lane_model.hpp"

namespace lanebench {

struct LossWeights {
  double w_cls = 1.0;
  double w_xytl = 1.0;
  double w_liou = 1.0;
  double w_sim = 3.0;  // consumed by the assignment cost
};

void validate_weights(const LossWeights& w);

double focal_loss(double p_fg, bool is_positive, double alpha = 0.25, double gamma = 2.0);

double smooth_l1(double pred, double target, double beta = 1.0);

// Mean smooth-L1 over (start_x, start_y, theta, length) against the assigned
// ground-truth prior.
double xytl_loss(const LanePrior& pred, const LanePrior& target, double beta = 1.0);

double total_loss(double l_cls, double l_xytl, double l_liou, const LossWeights& w);

}  // namespace lanebench
