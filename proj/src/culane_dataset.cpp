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

#include "lanebench/culane_dataset.hpp"

#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include "lanebench/bench_io.hpp"
#include "lanebench/error.hpp"

namespace lanebench {

namespace {

constexpr std::string_view kLinesSuffix = ".lines.txt";

std::vector<Polyline> load_lines(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_culane_lines(text);
  } catch (const LineError& e) {
    throw LineError(e.kind(), e.line(), path.string() + ": " + e.what());
  }
}

std::vector<std::string> read_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open list file " + path.string());
  std::vector<std::string> stems;
  try {
    for_each_culane_list_entry(in, [&](CulaneEntry&& e) { stems.push_back(image_stem(e.image_path)); });
  } catch (const LineError& e) {
    throw LineError(e.kind(), e.line(), path.string() + ": " + e.what());
  }
  return stems;
}

}  // namespace

std::string image_stem(std::string_view image_path) {
  while (!image_path.empty() && image_path.front() == '/') image_path.remove_prefix(1);
  const auto slash = image_path.rfind('/');
  const auto dot = image_path.rfind('.');
  if (dot != std::string_view::npos && (slash == std::string_view::npos || dot > slash)) {
    image_path = image_path.substr(0, dot);
  }
  return std::string(image_path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Lane> lanes_on_grid(const std::vector<Polyline>& polylines, const YGrid& grid, std::size_t& dropped) {
  std::vector<Lane> lanes;
  lanes.reserve(polylines.size());
  for (const Polyline& p : polylines) {
    try {
      lanes.push_back(resample_to_grid(p, grid));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnrepresentableLane) throw;
      ++dropped;
    }
  }
  return lanes;
}

CulaneDataset load_culane_dataset(const CulaneLayout& layout, const YGrid& grid, int jobs) {
  namespace fs = std::filesystem;
  for (const fs::path& dir : {layout.gt_root, layout.pred_root}) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
  }
  const std::vector<std::string> stems = read_list(layout.list_file);
  const std::set<std::string> listed(stems.begin(), stems.end());

  std::vector<std::string> dangling;
  for (const auto& entry : fs::recursive_directory_iterator(layout.pred_root)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = entry.path().lexically_relative(layout.pred_root).generic_string();
    if (!rel.ends_with(kLinesSuffix)) continue;
    const std::string stem = rel.substr(0, rel.size() - kLinesSuffix.size());
    if (!listed.contains(stem)) dangling.push_back(stem);
  }
  if (!dangling.empty()) throw DanglingPredictionError(std::move(dangling));

  struct Loaded {
    std::vector<Lane> gt;
    std::vector<Lane> pred;
    std::size_t dropped = 0;
  };
  std::vector<Loaded> loaded(stems.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(stems.size());
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const std::string& stem = stems[static_cast<std::size_t>(i)];
      Loaded& slot = loaded[static_cast<std::size_t>(i)];
      slot.gt = lanes_on_grid(load_lines(layout.gt_root / (stem + std::string(kLinesSuffix))), grid, slot.dropped);
      const fs::path pred_path = layout.pred_root / (stem + std::string(kLinesSuffix));
      if (fs::exists(pred_path)) slot.pred = lanes_on_grid(load_lines(pred_path), grid, slot.dropped);
    } catch (...) {
#pragma omp critical(lanebench_load_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  CulaneDataset ds;
  for (std::size_t i = 0; i < stems.size(); ++i) {
    ds.dropped_lanes += loaded[i].dropped;
    std::vector<ScoredLane> scored;
    for (Lane& lane : loaded[i].pred) scored.push_back({std::move(lane), 1.0});
    ds.gt[stems[i]] = std::move(loaded[i].gt);
    if (!scored.empty()) ds.pred[stems[i]] = std::move(scored);
  }

  if (layout.category_dir) {
    for (Category c : kAllCategories) {
      const fs::path path = *layout.category_dir / category_list_file(c);
      if (!fs::exists(path)) continue;
      for (const std::string& stem : read_list(path)) {
        if (ds.gt.contains(stem)) ds.categories[stem] = c;
      }
    }
  }
  return ds;
}

}  // namespace lanebench
