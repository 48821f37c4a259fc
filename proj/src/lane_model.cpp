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

#include "lanebench/lane_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lanebench/error.hpp"

namespace lanebench {

YGrid::YGrid(int n_points, double image_height)
    : n_points_(n_points), image_height_(image_height) {
  if (n_points < 2) throw_invalid("grid needs at least 2 points");
  if (!(image_height > 0.0) || !std::isfinite(image_height)) {
    throw_invalid("grid height must be positive");
  }
}

// H * i / (N - 1) rather than spacing * i: the last row lands on H exactly.
double YGrid::y(int i) const { return image_height_ * i / (n_points_ - 1); }

std::vector<double> YGrid::ys() const {
  std::vector<double> out(static_cast<std::size_t>(n_points_));
  for (int i = 0; i < n_points_; ++i) out[static_cast<std::size_t>(i)] = y(i);
  return out;
}

int YGrid::nearest_index(double y) const {
  const double idx = std::round(y / spacing());
  if (!(idx > 0.0)) return 0;
  if (idx >= n_points_ - 1) return n_points_ - 1;
  return static_cast<int>(idx);
}

YGrid make_y_grid(int n_points, double image_height) { return YGrid(n_points, image_height); }

Lane::Lane(std::vector<double> xs, int valid_begin, int valid_end)
    : xs_(std::move(xs)), begin_(valid_begin), end_(valid_end) {
  if (begin_ < 0 || end_ < begin_ || end_ > size()) {
    throw_invalid("lane valid range out of bounds");
  }
  for (int i = begin_; i < end_; ++i) {
    if (!std::isfinite(x(i))) throw_invalid("lane has a non-finite valid coordinate");
  }
  if (begin_ == end_) begin_ = end_ = 0;
}

Lane::Lane(std::vector<double> xs, const std::vector<bool>& valid) : xs_(std::move(xs)) {
  if (valid.size() != xs_.size()) throw_invalid("lane mask length differs from xs");
  const auto first = std::find(valid.begin(), valid.end(), true);
  const auto past = std::find(first, valid.end(), false);
  if (std::find(past, valid.end(), true) != valid.end()) {
    throw_invalid("lane valid mask is not contiguous");
  }
  begin_ = static_cast<int>(first - valid.begin());
  end_ = static_cast<int>(past - valid.begin());
  for (int i = begin_; i < end_; ++i) {
    if (!std::isfinite(x(i))) throw_invalid("lane has a non-finite valid coordinate");
  }
  if (begin_ == end_) begin_ = end_ = 0;
}

std::vector<bool> Lane::mask() const {
  std::vector<bool> m(xs_.size(), false);
  for (int i = begin_; i < end_; ++i) m[static_cast<std::size_t>(i)] = true;
  return m;
}

Polyline Lane::points(const YGrid& grid) const {
  Polyline out;
  out.reserve(static_cast<std::size_t>(valid_count()));
  for (int i = begin_; i < end_; ++i) out.push_back({x(i), grid.y(i)});
  return out;
}

bool operator==(const Lane& a, const Lane& b) {
  if (a.size() != b.size() || a.begin_ != b.begin_ || a.end_ != b.end_) return false;
  for (int i = a.begin_; i < a.end_; ++i) {
    if (a.x(i) != b.x(i)) return false;
  }
  return true;
}

double clamp_theta(double theta) { return std::clamp(theta, kMinTheta, kMaxTheta); }

PriorCorrection& PriorCorrection::operator+=(const PriorCorrection& other) {
  start_x += other.start_x;
  start_y += other.start_y;
  theta += other.theta;
  length += other.length;
  if (offsets.empty()) {
    offsets = other.offsets;
  } else if (!other.offsets.empty()) {
    if (offsets.size() != other.offsets.size()) throw_invalid("offset corrections differ in length");
    for (std::size_t i = 0; i < offsets.size(); ++i) offsets[i] += other.offsets[i];
  }
  if (other.fg_prob) fg_prob = other.fg_prob;
  return *this;
}

PriorCorrection operator+(PriorCorrection a, const PriorCorrection& b) {
  a += b;
  return a;
}

void validate_prior(const LanePrior& prior, const YGrid& grid) {
  if (!(prior.fg_prob >= 0.0 && prior.fg_prob <= 1.0 && prior.bg_prob >= 0.0 &&
        prior.bg_prob <= 1.0)) {
    throw_invalid("prior probabilities must lie in [0, 1]");
  }
  if (std::abs(prior.fg_prob + prior.bg_prob - 1.0) > 1e-9) {
    throw_invalid("prior probabilities must sum to 1");
  }
  if (!(prior.theta >= kMinTheta && prior.theta <= kMaxTheta)) {
    throw_invalid("prior theta outside [5deg, 175deg]");
  }
  if (prior.length < 0) throw_invalid("prior length is negative");
  if (prior.offsets.size() != static_cast<std::size_t>(grid.size())) {
    throw_invalid("prior offsets do not match grid size");
  }
  if (!std::isfinite(prior.start_x) || !std::isfinite(prior.start_y)) {
    throw_invalid("prior start point is not finite");
  }
}

Lane resample_to_grid(std::span<const Point> polyline, const YGrid& grid) {
  if (polyline.size() < 2) {
    throw Error(ErrorKind::kUnrepresentableLane, "polyline needs at least 2 points");
  }
  Polyline pts(polyline.begin(), polyline.end());
  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.y == b.y; }),
            pts.end());
  if (pts.size() < 2) {
    throw Error(ErrorKind::kUnrepresentableLane, "polyline has no vertical extent");
  }
  for (const auto& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw_invalid("polyline has a non-finite point");
  }

  // Rows within kEndpointSnap of an end point count as covered, so lanes
  // written with rounded grid ys read back onto the same rows.
  const double y_min = pts.front().y - kEndpointSnap;
  const double y_max = pts.back().y + kEndpointSnap;
  const int n = grid.size();
  std::vector<double> xs(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
  int begin = n;
  int end = 0;
  std::size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    const double y = grid.y(i);
    if (y < y_min || y > y_max) continue;
    double x;
    if (y >= pts.back().y) {
      x = pts.back().x;
    } else if (y <= pts.front().y) {
      x = pts.front().x;
    } else {
      while (pts[seg + 1].y <= y) ++seg;
      const Point& a = pts[seg];
      const Point& b = pts[seg + 1];
      x = a.x + (b.x - a.x) * ((y - a.y) / (b.y - a.y));
    }
    xs[static_cast<std::size_t>(i)] = x;
    begin = std::min(begin, i);
    end = i + 1;
  }
  if (begin >= end) {
    throw Error(ErrorKind::kUnrepresentableLane, "polyline covers no grid row");
  }
  return Lane(std::move(xs), begin, end);
}

Lane prior_to_lane(const LanePrior& prior, const YGrid& grid) {
  validate_prior(prior, grid);
  // cot(theta) as tan(pi/2 - theta) so a vertical prior has exactly zero drift.
  const double cot = std::tan(std::numbers::pi / 2 - prior.theta);
  const int n = grid.size();
  const int begin = grid.nearest_index(prior.start_y);
  const int end = std::min(n, begin + prior.length);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    xs[k] = prior.start_x + (grid.y(i) - prior.start_y) * cot + prior.offsets[k];
  }
  return Lane(std::move(xs), begin, std::max(begin, end));
}

LanePrior refine_step(const LanePrior& prior, const PriorCorrection& correction) {
  LanePrior out = prior;
  out.start_x += correction.start_x;
  out.start_y += correction.start_y;
  out.theta = clamp_theta(prior.theta + correction.theta);
  out.length = std::max(0, prior.length + correction.length);
  if (!correction.offsets.empty()) {
    if (correction.offsets.size() != out.offsets.size()) {
      throw_invalid("offset correction does not match prior size");
    }
    for (std::size_t i = 0; i < out.offsets.size(); ++i) out.offsets[i] += correction.offsets[i];
  }
  if (correction.fg_prob) {
    out.fg_prob = std::clamp(*correction.fg_prob, 0.0, 1.0);
    out.bg_prob = 1.0 - out.fg_prob;
  }
  return out;
}

std::vector<LanePrior> uniform_prior_init(int count, const YGrid& grid, double image_width,
                                          const PriorInitConfig& cfg) {
  if (count < 1) throw_invalid("prior count must be at least 1");
  if (!(image_width > 0.0)) throw_invalid("image width must be positive");
  if (cfg.theta_fan.empty()) throw_invalid("theta fan is empty");
  std::vector<LanePrior> priors;
  priors.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    LanePrior p;
    p.start_x = image_width * (j + 1) / (count + 1);
    p.start_y = cfg.start_y;
    p.theta = clamp_theta(cfg.theta_fan[static_cast<std::size_t>(j) % cfg.theta_fan.size()]);
    p.length = grid.size();
    p.offsets.assign(static_cast<std::size_t>(grid.size()), 0.0);
    p.fg_prob = 0.5;
    p.bg_prob = 0.5;
    priors.push_back(std::move(p));
  }
  return priors;
}

}  // namespace lanebench
