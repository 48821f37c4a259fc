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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanebench/evaluator.hpp"
#include "lanebench/lane_model.hpp"

namespace lanebench {

// "/driver_23/05.MP4/00000.jpg" -> "driver_23/05.MP4/00000"
std::string image_stem(std::string_view image_path);

struct CulaneDataset {
  std::map<std::string, std::vector<Lane>> gt;
  std::map<std::string, std::vector<ScoredLane>> pred;
  std::map<std::string, Category> categories;
  std::size_t dropped_lanes = 0;  // polylines that cover no grid row
};

struct CulaneLayout {
  std::filesystem::path gt_root;
  std::filesystem::path pred_root;
  std::filesystem::path list_file;
  std::optional<std::filesystem::path> category_dir;
};

// Loads every listed image's `<stem>.lines.txt` from both trees and
// resamples it onto `grid`. A listed image without a prediction file has no
// predictions; a prediction file for an unlisted image raises
// DanglingPredictionError. Missing ground truth raises kIo.
CulaneDataset load_culane_dataset(const CulaneLayout& layout, const YGrid& grid, int jobs = 1);

std::string read_file(const std::filesystem::path& path);

// Lanes resampled onto the grid; the count of unrepresentable ones is added
// to `dropped`.
std::vector<Lane> lanes_on_grid(const std::vector<Polyline>& polylines, const YGrid& grid, std::size_t& dropped);

}  // namespace lanebench
