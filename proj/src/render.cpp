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

#include "lanebench/render.hpp"

#include "lanebench/bench_io.hpp"
#include "lanebench/error.hpp"

namespace lanebench {

namespace {

std::string path_of(const Polyline& lane) {
  std::string d;
  for (std::size_t i = 0; i < lane.size(); ++i) {
    d += i == 0 ? "M" : " L";
    d += format_coordinate(lane[i].x) + ',' + format_coordinate(lane[i].y);
  }
  return d;
}

void stroke_all(std::string& out, const std::vector<Polyline>& lanes, const char* color, double width,
                double opacity) {
  for (const Polyline& lane : lanes) {
    if (lane.empty()) continue;
    out += "    <path d=\"" + path_of(lane) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           format_coordinate(width) + "\" stroke-opacity=\"" + format_coordinate(opacity) +
           "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
  }
}

}  // namespace

std::string render_overlay_svg(const std::vector<Polyline>& gt, const std::vector<Polyline>& pred,
                               const Canvas& canvas, double mask_width) {
  if (canvas.width <= 0 || canvas.height <= 0) throw_invalid("canvas must be non-empty");
  if (!(mask_width > 0.0)) throw_invalid("stroke width must be positive");
  const std::string w = std::to_string(canvas.width);
  const std::string h = std::to_string(canvas.height);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(2 * canvas.width) + "\" height=\"" +
         h + "\" viewBox=\"0 0 " + std::to_string(2 * canvas.width) + ' ' + h + "\">\n";
  out += "  <g id=\"ground-truth\">\n";
  out += "    <rect width=\"" + w + "\" height=\"" + h + "\" fill=\"#202020\"/>\n";
  stroke_all(out, gt, "#33cc33", mask_width, 0.9);
  out += "  </g>\n";
  out += "  <g id=\"prediction\" transform=\"translate(" + w + ",0)\">\n";
  out += "    <rect width=\"" + w + "\" height=\"" + h + "\" fill=\"#202020\"/>\n";
  stroke_all(out, gt, "#33cc33", mask_width, 0.35);
  stroke_all(out, pred, "#ff3b30", mask_width / 3.0, 0.95);
  out += "  </g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace lanebench
