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
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanebench/lane_model.hpp"

namespace lanebench {

// CULane `.lines.txt`: one lane per line, alternating "x y" tokens.
// Points come back sorted by ascending y.
std::vector<Polyline> parse_culane_lines(std::string_view text);

struct CulaneWriteResult {
  std::string text;
  std::size_t skipped = 0;  // lanes with fewer than 2 valid points
};

// Valid points only, bottom to top, at most 5 fractional digits.
CulaneWriteResult write_culane_lines(const std::vector<Lane>& lanes, const YGrid& grid);

// Same text format for raw polylines, points emitted in descending y.
std::string format_culane_polylines(const std::vector<Polyline>& lanes);

// Shortest decimal for the value rounded to 5 fractional digits.
std::string format_coordinate(double v);

struct CulaneEntry {
  std::string image_path;
  std::optional<std::string> seg_path;
  std::optional<std::array<bool, 4>> exists;
  std::vector<Polyline> lanes;
};

std::vector<CulaneEntry> parse_culane_list(std::string_view text);

// Streams entries one line at a time.
void for_each_culane_list_entry(std::istream& in, const std::function<void(CulaneEntry&&)>& sink);

// TuSimple JSON-lines record. Negative x (canonically -2) means no point.
struct TusimpleRecord {
  std::string raw_file;
  std::vector<int> h_samples;
  std::vector<std::vector<double>> lanes;
  std::optional<double> run_time;

  friend bool operator==(const TusimpleRecord&, const TusimpleRecord&) = default;
};

inline constexpr double kTusimpleMissing = -2.0;

inline bool tusimple_point_valid(double x) { return x >= 0.0; }

std::vector<TusimpleRecord> parse_tusimple_records(std::string_view text);

void for_each_tusimple_record(std::istream& in, const std::function<void(TusimpleRecord&&)>& sink);

// Keys in order raw_file, lanes, run_time (when present), h_samples; lane
// values rounded to integers, invalid points written as -2.
std::string write_tusimple_predictions(const std::vector<TusimpleRecord>& records);

// The valid points of each lane, ascending y.
std::vector<Polyline> tusimple_polylines(const TusimpleRecord& record);

}  // namespace lanebench
