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
#include <cstdint>
#include <span>
#include <vector>

#include "lanebench/lane_model.hpp"

namespace lanebench {

struct Canvas {
  int width = 1640;
  int height = 590;
};

// Pixel set of a polyline stroked with round joins and caps. Pixel (px, py)
// belongs to the stroke when its center (px + 0.5, py + 0.5) lies within
// width / 2 of the polyline. Stored as sorted, disjoint inclusive runs per row.
class LaneMask {
 public:
  struct Run {
    std::int32_t x0;
    std::int32_t x1;
  };

  LaneMask() = default;

  int first_row() const { return first_row_; }
  int row_count() const { return static_cast<int>(row_start_.empty() ? 0 : row_start_.size() - 1); }
  std::span<const Run> row(int y) const;
  std::size_t area() const { return area_; }

  friend LaneMask rasterize_lane(std::span<const Point> polyline, double stroke_width, const Canvas& canvas);

 private:
  int first_row_ = 0;
  std::vector<std::uint32_t> row_start_;
  std::vector<Run> runs_;
  std::size_t area_ = 0;
};

LaneMask rasterize_lane(std::span<const Point> polyline, double stroke_width, const Canvas& canvas);

std::size_t intersection_area(const LaneMask& a, const LaneMask& b);

// |A n B| / |A u B|; 0 when both masks are empty.
double mask_iou(const LaneMask& a, const LaneMask& b);

// Serial reference: tests every pixel center against every segment.
// Row-major canvas bitmap.
std::vector<std::uint8_t> reference_bitmap(std::span<const Point> polyline, double stroke_width,
                                           const Canvas& canvas);

double reference_bitmap_iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// Expands a scanline mask into a full canvas bitmap.
std::vector<std::uint8_t> to_bitmap(const LaneMask& mask, const Canvas& canvas);

}  // namespace lanebench
