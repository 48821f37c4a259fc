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
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace lanebench {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Polyline = std::vector<Point>;

// Uniform vertical sampling grid. Index 0 is the top image row.
class YGrid {
 public:
  YGrid(int n_points, double image_height);

  int size() const { return n_points_; }
  double image_height() const { return image_height_; }
  double spacing() const { return image_height_ / (n_points_ - 1); }
  double y(int i) const;
  std::vector<double> ys() const;

  // Index of the grid row closest to y, clamped to the grid.
  int nearest_index(double y) const;

 private:
  int n_points_;
  double image_height_;
};

YGrid make_y_grid(int n_points, double image_height);

// N horizontal coordinates on a YGrid. Validity is a single contiguous run
// [valid_begin, valid_end); coordinates outside the run are not meaningful.
class Lane {
 public:
  Lane() = default;
  Lane(std::vector<double> xs, int valid_begin, int valid_end);
  // Throws kInvalidArgument when the mask is not one contiguous run or its
  // length differs from xs.
  Lane(std::vector<double> xs, const std::vector<bool>& valid);

  int size() const { return static_cast<int>(xs_.size()); }
  std::span<const double> xs() const { return xs_; }
  double x(int i) const { return xs_[static_cast<std::size_t>(i)]; }
  bool valid(int i) const { return i >= begin_ && i < end_; }
  int valid_begin() const { return begin_; }
  int valid_end() const { return end_; }
  int valid_count() const { return end_ - begin_; }
  std::vector<bool> mask() const;

  // Valid points as (x, y) pairs, top to bottom.
  Polyline points(const YGrid& grid) const;

  friend bool operator==(const Lane& a, const Lane& b);

 private:
  std::vector<double> xs_;
  int begin_ = 0;
  int end_ = 0;
};

struct ScoredLane {
  Lane lane;
  double score = 0.0;
};

inline constexpr double kMinTheta = 5.0 * std::numbers::pi / 180.0;
inline constexpr double kMaxTheta = std::numbers::pi - kMinTheta;

double clamp_theta(double theta);

struct LanePrior {
  double start_x = 0.0;
  double start_y = 0.0;
  double theta = std::numbers::pi / 2;  // angle with the x-axis, radians
  int length = 0;                       // number of valid grid points
  std::vector<double> offsets;          // one per grid row
  double fg_prob = 0.5;
  double bg_prob = 0.5;

  friend bool operator==(const LanePrior&, const LanePrior&) = default;
};

// Residual correction applied by one refinement stage. An empty offsets
// vector means "no offset change"; probabilities are replaced when present.
struct PriorCorrection {
  double start_x = 0.0;
  double start_y = 0.0;
  double theta = 0.0;
  int length = 0;
  std::vector<double> offsets;
  std::optional<double> fg_prob;

  PriorCorrection& operator+=(const PriorCorrection& other);
};

PriorCorrection operator+(PriorCorrection a, const PriorCorrection& b);

// Throws kInvalidArgument when probabilities or theta violate the prior
// invariants, or offsets do not match the grid size.
void validate_prior(const LanePrior& prior, const YGrid& grid);

// Slack, in pixels, when deciding whether a grid row lies inside a polyline's
// vertical span.
inline constexpr double kEndpointSnap = 1e-3;

// Linear interpolation of x(y) onto the grid rows inside the polyline's
// vertical span. Points may arrive in any order.
Lane resample_to_grid(std::span<const Point> polyline, const YGrid& grid);

Lane prior_to_lane(const LanePrior& prior, const YGrid& grid);

LanePrior refine_step(const LanePrior& prior, const PriorCorrection& correction);

struct PriorInitConfig {
  std::vector<double> theta_fan = {std::numbers::pi / 6, std::numbers::pi / 3,
                                   std::numbers::pi / 2, 2 * std::numbers::pi / 3,
                                   5 * std::numbers::pi / 6};
  double start_y = 0.0;
};

std::vector<LanePrior> uniform_prior_init(int count, const YGrid& grid, double image_width,
                                          const PriorInitConfig& cfg = {});

}  // namespace lanebench
