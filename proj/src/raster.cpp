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

#include "lanebench/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = kInf;
  double hi = -kInf;

  bool empty() const { return !(lo <= hi); }
  void intersect(double a, double b) {
    lo = std::max(lo, std::min(a, b));
    hi = std::min(hi, std::max(a, b));
  }
  void hull(const Interval& o) {
    if (o.empty()) return;
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }
};

Interval disk_row(const Point& c, double r, double yc) {
  const double dy = yc - c.y;
  if (std::abs(dy) > r) return {};
  const double half = std::sqrt(r * r - dy * dy);
  return {c.x - half, c.x + half};
}

// Horizontal line y = yc intersected with the capsule around segment a-b.
// The capsule is convex, so the hull of the three pieces is exact.
Interval capsule_row(const Point& a, const Point& b, double r, double yc) {
  Interval out = disk_row(a, r, yc);
  out.hull(disk_row(b, r, yc));
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return out;
  const double len = std::sqrt(len2);
  const double ry = yc - a.y;

  // 0 <= (x - a.x) dx + ry dy <= len2
  Interval body{-kInf, kInf};
  if (dx != 0.0) {
    body.intersect(a.x + (-ry * dy) / dx, a.x + (len2 - ry * dy) / dx);
  } else if (ry * dy < 0.0 || ry * dy > len2) {
    return out;
  }
  // |-(x - a.x) dy + ry dx| <= r len
  if (dy != 0.0) {
    body.intersect(a.x + (ry * dx - r * len) / dy, a.x + (ry * dx + r * len) / dy);
  } else if (std::abs(ry * dx) > r * len) {
    return out;
  }
  out.hull(body);
  return out;
}

struct RowInterval {
  int row;
  std::int32_t x0;
  std::int32_t x1;
};

void check_stroke(double stroke_width, const Canvas& canvas) {
  if (!(stroke_width > 0.0)) throw_invalid("stroke width must be positive");
  if (canvas.width <= 0 || canvas.height <= 0) throw_invalid("canvas must be non-empty");
}

}  // namespace

std::span<const LaneMask::Run> LaneMask::row(int y) const {
  const int i = y - first_row_;
  if (i < 0 || i >= row_count()) return {};
  const auto k = static_cast<std::size_t>(i);
  return std::span<const Run>(runs_.data() + row_start_[k], row_start_[k + 1] - row_start_[k]);
}

LaneMask rasterize_lane(std::span<const Point> polyline, double stroke_width, const Canvas& canvas) {
  check_stroke(stroke_width, canvas);
  LaneMask mask;
  if (polyline.empty()) return mask;
  const double r = stroke_width / 2.0;

  double y_min = kInf, y_max = -kInf;
  for (const Point& p : polyline) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  // Row py is touched when its center py + 0.5 lies in [y_min - r, y_max + r].
  const int row_lo = std::max(0, static_cast<int>(std::ceil(y_min - r - 0.5)));
  const int row_hi = std::min(canvas.height - 1, static_cast<int>(std::floor(y_max + r - 0.5)));
  if (row_lo > row_hi) return mask;
  const auto n_rows = static_cast<std::size_t>(row_hi - row_lo + 1);

  std::vector<RowInterval> pieces;
  pieces.reserve(polyline.size() * static_cast<std::size_t>(2 * r + 2));
  auto emit = [&](int py, const Interval& iv) {
    if (iv.empty()) return;
    const double lo = std::ceil(iv.lo - 0.5);
    const double hi = std::floor(iv.hi - 0.5);
    if (hi < 0.0 || lo > canvas.width - 1 || lo > hi) return;
    pieces.push_back({py, static_cast<std::int32_t>(std::max(lo, 0.0)),
                      static_cast<std::int32_t>(std::min(hi, canvas.width - 1.0))});
  };
  auto rows_of = [&](double lo_y, double hi_y, auto&& fn) {
    const int a = std::max(row_lo, static_cast<int>(std::ceil(lo_y - r - 0.5)));
    const int b = std::min(row_hi, static_cast<int>(std::floor(hi_y + r - 0.5)));
    for (int py = a; py <= b; ++py) fn(py, py + 0.5);
  };

  if (polyline.size() == 1) {
    const Point& c = polyline[0];
    rows_of(c.y, c.y, [&](int py, double yc) { emit(py, disk_row(c, r, yc)); });
  }
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Point& a = polyline[s];
    const Point& b = polyline[s + 1];
    rows_of(std::min(a.y, b.y), std::max(a.y, b.y),
            [&](int py, double yc) { emit(py, capsule_row(a, b, r, yc)); });
  }

  // Bucket by row, then merge overlapping or adjacent runs within each row.
  std::vector<std::uint32_t> count(n_rows + 1, 0);
  for (const auto& p : pieces) ++count[static_cast<std::size_t>(p.row - row_lo) + 1];
  for (std::size_t i = 1; i <= n_rows; ++i) count[i] += count[i - 1];
  std::vector<LaneMask::Run> bucketed(pieces.size());
  {
    std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
    for (const auto& p : pieces) {
      bucketed[fill[static_cast<std::size_t>(p.row - row_lo)]++] = {p.x0, p.x1};
    }
  }

  mask.first_row_ = row_lo;
  mask.row_start_.assign(n_rows + 1, 0);
  mask.runs_.reserve(bucketed.size());
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto begin = bucketed.begin() + count[i];
    const auto end = bucketed.begin() + count[i + 1];
    std::sort(begin, end, [](const LaneMask::Run& x, const LaneMask::Run& y) { return x.x0 < y.x0; });
    const std::size_t row_first = mask.runs_.size();
    for (auto it = begin; it != end; ++it) {
      if (mask.runs_.size() > row_first && it->x0 <= mask.runs_.back().x1 + 1) {
        mask.runs_.back().x1 = std::max(mask.runs_.back().x1, it->x1);
      } else {
        mask.runs_.push_back(*it);
      }
    }
    mask.row_start_[i + 1] = static_cast<std::uint32_t>(mask.runs_.size());
  }
  for (const auto& run : mask.runs_) mask.area_ += static_cast<std::size_t>(run.x1 - run.x0 + 1);
  return mask;
}

std::size_t intersection_area(const LaneMask& a, const LaneMask& b) {
  const int lo = std::max(a.first_row(), b.first_row());
  const int hi = std::min(a.first_row() + a.row_count(), b.first_row() + b.row_count());
  std::size_t total = 0;
  for (int y = lo; y < hi; ++y) {
    const auto ra = a.row(y);
    const auto rb = b.row(y);
    std::size_t i = 0, j = 0;
    while (i < ra.size() && j < rb.size()) {
      const std::int32_t x0 = std::max(ra[i].x0, rb[j].x0);
      const std::int32_t x1 = std::min(ra[i].x1, rb[j].x1);
      if (x0 <= x1) total += static_cast<std::size_t>(x1 - x0 + 1);
      if (ra[i].x1 < rb[j].x1) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  return total;
}

double mask_iou(const LaneMask& a, const LaneMask& b) {
  const std::size_t inter = intersection_area(a, b);
  const std::size_t uni = a.area() + b.area() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::uint8_t> reference_bitmap(std::span<const Point> polyline, double stroke_width,
                                           const Canvas& canvas) {
  check_stroke(stroke_width, canvas);
  const auto w = static_cast<std::size_t>(canvas.width);
  std::vector<std::uint8_t> bits(w * static_cast<std::size_t>(canvas.height), 0);
  if (polyline.empty()) return bits;
  const double r = stroke_width / 2.0;
  const double r2 = r * r;
  double x_min = kInf, x_max = -kInf, y_min = kInf, y_max = -kInf;
  for (const Point& p : polyline) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  // Bounding box with a one-pixel margin; every pixel inside it is tested.
  const int px_lo = std::max(0, static_cast<int>(std::floor(x_min - r)) - 1);
  const int px_hi = std::min(canvas.width - 1, static_cast<int>(std::ceil(x_max + r)) + 1);
  const int py_lo = std::max(0, static_cast<int>(std::floor(y_min - r)) - 1);
  const int py_hi = std::min(canvas.height - 1, static_cast<int>(std::ceil(y_max + r)) + 1);
  for (int py = py_lo; py <= py_hi; ++py) {
    for (int px = px_lo; px <= px_hi; ++px) {
      const double cx = px + 0.5;
      const double cy = py + 0.5;
      bool inside = false;
      for (std::size_t s = 0; s < polyline.size() && !inside; ++s) {
        const Point& a = polyline[s];
        const Point& b = s + 1 < polyline.size() ? polyline[s + 1] : polyline[s];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        double t = 0.0;
        if (len2 > 0.0) t = std::clamp(((cx - a.x) * dx + (cy - a.y) * dy) / len2, 0.0, 1.0);
        const double ex = cx - (a.x + t * dx);
        const double ey = cy - (a.y + t * dy);
        inside = ex * ex + ey * ey <= r2;
      }
      if (inside) bits[static_cast<std::size_t>(py) * w + static_cast<std::size_t>(px)] = 1;
    }
  }
  return bits;
}

double reference_bitmap_iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw_invalid("bitmaps differ in size");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] & b[i]) != 0;
    uni += (a[i] | b[i]) != 0;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::uint8_t> to_bitmap(const LaneMask& mask, const Canvas& canvas) {
  const auto w = static_cast<std::size_t>(canvas.width);
  std::vector<std::uint8_t> bits(w * static_cast<std::size_t>(canvas.height), 0);
  for (int y = mask.first_row(); y < mask.first_row() + mask.row_count(); ++y) {
    for (const auto& run : mask.row(y)) {
      for (std::int32_t x = run.x0; x <= run.x1; ++x) {
        bits[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] = 1;
      }
    }
  }
  return bits;
}

}  // namespace lanebench
