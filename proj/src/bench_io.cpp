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

#include "lanebench/bench_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {

using nlohmann::json;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Calls fn(line_number, line) for every "\n"-terminated (or final) line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    fn(++line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

double parse_number(std::string_view token, std::size_t line_no) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw LineError(ErrorKind::kParse, line_no, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

Polyline parse_lane_line(const std::vector<std::string_view>& tokens, std::size_t line_no) {
  if (tokens.size() % 2 != 0) {
    throw LineError(ErrorKind::kMalformedLane, line_no, "odd number of coordinates");
  }
  Polyline lane;
  lane.reserve(tokens.size() / 2);
  for (std::size_t i = 0; i < tokens.size(); i += 2) {
    lane.push_back({parse_number(tokens[i], line_no), parse_number(tokens[i + 1], line_no)});
  }
  if (lane.size() < 2) throw LineError(ErrorKind::kMalformedLane, line_no, "lane needs at least 2 points");
  std::stable_sort(lane.begin(), lane.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
  for (std::size_t i = 1; i < lane.size(); ++i) {
    if (lane[i].y == lane[i - 1].y) {
      throw LineError(ErrorKind::kMalformedLane, line_no, "duplicate y coordinate");
    }
  }
  return lane;
}

CulaneEntry parse_list_line(const std::vector<std::string_view>& tokens, std::size_t line_no) {
  CulaneEntry e;
  if (tokens.size() != 1 && tokens.size() != 6) {
    throw LineError(ErrorKind::kParse, line_no,
                    "expected 1 or 6 tokens, got " + std::to_string(tokens.size()));
  }
  e.image_path = std::string(tokens[0]);
  if (tokens.size() == 6) {
    e.seg_path = std::string(tokens[1]);
    std::array<bool, 4> flags{};
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string_view f = tokens[2 + k];
      if (f != "0" && f != "1") {
        throw LineError(ErrorKind::kParse, line_no, "lane flag must be 0 or 1: '" + std::string(f) + "'");
      }
      flags[k] = f == "1";
    }
    e.exists = flags;
  }
  return e;
}

[[noreturn]] void schema_error(std::size_t line_no, const std::string& what) {
  throw LineError(ErrorKind::kSchema, line_no, what);
}

TusimpleRecord parse_tusimple_line(std::string_view line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw LineError(ErrorKind::kParse, line_no, e.what());
  }
  if (!doc.is_object()) schema_error(line_no, "record is not a JSON object");
  for (const char* key : {"lanes", "h_samples", "raw_file"}) {
    if (!doc.contains(key)) schema_error(line_no, std::string("missing key '") + key + "'");
  }
  TusimpleRecord r;
  if (!doc["raw_file"].is_string()) schema_error(line_no, "raw_file must be a string");
  r.raw_file = doc["raw_file"].get<std::string>();

  const json& hs = doc["h_samples"];
  if (!hs.is_array()) schema_error(line_no, "h_samples must be an array");
  for (const json& h : hs) {
    if (!h.is_number_integer()) schema_error(line_no, "h_samples must hold integers");
    const auto v = h.get<long long>();
    if (!r.h_samples.empty() && v <= r.h_samples.back()) {
      schema_error(line_no, "h_samples must be strictly ascending");
    }
    r.h_samples.push_back(static_cast<int>(v));
  }

  const json& lanes = doc["lanes"];
  if (!lanes.is_array()) schema_error(line_no, "lanes must be an array");
  for (const json& lane : lanes) {
    if (!lane.is_array()) schema_error(line_no, "each lane must be an array");
    if (lane.size() != r.h_samples.size()) {
      schema_error(line_no, "lane length " + std::to_string(lane.size()) + " differs from h_samples length " +
                                std::to_string(r.h_samples.size()));
    }
    std::vector<double> xs;
    xs.reserve(lane.size());
    for (const json& x : lane) {
      if (!x.is_number()) schema_error(line_no, "lane values must be numbers");
      xs.push_back(x.get<double>());
    }
    r.lanes.push_back(std::move(xs));
  }

  if (doc.contains("run_time")) {
    if (!doc["run_time"].is_number()) schema_error(line_no, "run_time must be a number");
    r.run_time = doc["run_time"].get<double>();
  }
  return r;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return is_space(c); });
}

}  // namespace

std::vector<Polyline> parse_culane_lines(std::string_view text) {
  std::vector<Polyline> lanes;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = split_tokens(line);
    if (tokens.empty()) return;
    lanes.push_back(parse_lane_line(tokens, line_no));
  });
  return lanes;
}

std::string format_coordinate(double v) {
  double r = std::round(v * 1e5) / 1e5;
  if (r == 0.0) r = 0.0;  // no "-0"
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), r, std::chars_format::fixed);
  if (ec != std::errc()) throw_invalid("coordinate cannot be formatted");
  return std::string(buf, ptr);
}

std::string format_culane_polylines(const std::vector<Polyline>& lanes) {
  std::string out;
  for (const Polyline& lane : lanes) {
    Polyline pts = lane;
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.y > b.y; });
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) out += ' ';
      out += format_coordinate(pts[i].x);
      out += ' ';
      out += format_coordinate(pts[i].y);
    }
    out += '\n';
  }
  return out;
}

CulaneWriteResult write_culane_lines(const std::vector<Lane>& lanes, const YGrid& grid) {
  CulaneWriteResult result;
  std::vector<Polyline> polylines;
  for (const Lane& lane : lanes) {
    if (lane.size() != grid.size()) throw_invalid("lane is not on the output grid");
    if (lane.valid_count() < 2) {
      ++result.skipped;
      continue;
    }
    polylines.push_back(lane.points(grid));
  }
  result.text = format_culane_polylines(polylines);
  return result;
}

std::vector<CulaneEntry> parse_culane_list(std::string_view text) {
  std::vector<CulaneEntry> entries;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = split_tokens(line);
    if (tokens.empty()) return;
    entries.push_back(parse_list_line(tokens, line_no));
  });
  return entries;
}

void for_each_culane_list_entry(std::istream& in, const std::function<void(CulaneEntry&&)>& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    sink(parse_list_line(tokens, line_no));
  }
}

std::vector<TusimpleRecord> parse_tusimple_records(std::string_view text) {
  std::vector<TusimpleRecord> records;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    records.push_back(parse_tusimple_line(line, line_no));
  });
  return records;
}

void for_each_tusimple_record(std::istream& in, const std::function<void(TusimpleRecord&&)>& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    sink(parse_tusimple_line(line, line_no));
  }
}

std::string write_tusimple_predictions(const std::vector<TusimpleRecord>& records) {
  std::string out;
  for (const TusimpleRecord& r : records) {
    nlohmann::ordered_json doc;
    doc["raw_file"] = r.raw_file;
    nlohmann::ordered_json lanes = nlohmann::ordered_json::array();
    for (const auto& lane : r.lanes) {
      nlohmann::ordered_json xs = nlohmann::ordered_json::array();
      for (double x : lane) {
        xs.push_back(tusimple_point_valid(x) ? std::llround(x) : static_cast<long long>(kTusimpleMissing));
      }
      lanes.push_back(std::move(xs));
    }
    doc["lanes"] = std::move(lanes);
    if (r.run_time) doc["run_time"] = *r.run_time;
    doc["h_samples"] = r.h_samples;
    out += doc.dump();
    out += '\n';
  }
  return out;
}

std::vector<Polyline> tusimple_polylines(const TusimpleRecord& record) {
  std::vector<Polyline> out;
  for (const auto& lane : record.lanes) {
    Polyline pts;
    for (std::size_t i = 0; i < lane.size() && i < record.h_samples.size(); ++i) {
      if (tusimple_point_valid(lane[i])) pts.push_back({lane[i], static_cast<double>(record.h_samples[i])});
    }
    out.push_back(std::move(pts));
  }
  return out;
}

}  // namespace lanebench
