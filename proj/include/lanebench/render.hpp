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

#include <string>
#include <vector>

#include "lanebench/lane_model.hpp"
#include "lanebench/raster.hpp"

namespace lanebench {

// Two side-by-side panels on a blank canvas: ground truth on the left,
// predictions over faded ground truth on the right. Strokes are mask_width wide.
std::string render_overlay_svg(const std::vector<Polyline>& gt, const std::vector<Polyline>& pred,
                               const Canvas& canvas, double mask_width);

}  // namespace lanebench
