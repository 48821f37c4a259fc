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

#include "lanebench/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "lanebench/bench_io.hpp"
#include "lanebench/error.hpp"

namespace lanebench {

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SynthRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SynthRng::normal(double mean, double sigma) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + sigma * z;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
  return mean + sigma * mag * std::cos(2.0 * std::numbers::pi * u2);
}

void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.images < 1) throw_invalid("gen-synth needs at least one image");
  if (cfg.lanes_per_image < 1) throw_invalid("gen-synth needs at least one lane per image");
  if (!(cfg.noise_sigma >= 0.0)) throw_invalid("noise sigma must be non-negative");
  if (!(cfg.drop_prob >= 0.0 && cfg.drop_prob < 1.0)) throw_invalid("drop probability must lie in [0, 1)");
  if (cfg.canvas.width <= 0 || cfg.canvas.height <= 0) throw_invalid("canvas must be non-empty");
}

namespace {

// Lanes fan out from a shared vanishing region toward the bottom border.
// About half get a quadratic bulge.
Polyline make_lane(SynthRng& rng, int j, int count, const Canvas& canvas, double vanish_x, double top_y) {
  const double w = canvas.width;
  const double h = canvas.height;
  const double bottom_x = w * (j + 0.5) / count + rng.uniform(-0.04, 0.04) * w;
  const double top_x = vanish_x + (bottom_x - vanish_x) * 0.15;
  const double bulge = rng.bernoulli(0.5) ? rng.uniform(-40.0, 40.0) : 0.0;
  Polyline lane;
  for (double y = h; y >= top_y; y -= 10.0) {
    const double s = (h - y) / (h - top_y);  // 0 at the bottom, 1 at the top
    lane.push_back({bottom_x + (top_x - bottom_x) * s + 4.0 * bulge * s * (1.0 - s), y});
  }
  return lane;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace

std::vector<SynthImage> generate_synthetic(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  SynthRng rng(cfg.seed);
  std::vector<SynthImage> images;
  images.reserve(static_cast<std::size_t>(cfg.images));
  for (int i = 0; i < cfg.images; ++i) {
    SynthImage img;
    char stem[32];
    std::snprintf(stem, sizeof(stem), "synth/%05d", i);
    img.stem = stem;
    if (cfg.with_categories) img.category = kAllCategories[static_cast<std::size_t>(i) % kAllCategories.size()];
    const bool lane_free = img.category == Category::kCross;
    const double vanish_x = cfg.canvas.width * rng.uniform(0.45, 0.55);
    const double top_y = cfg.canvas.height * rng.uniform(0.42, 0.5);
    for (int j = 0; j < cfg.lanes_per_image && !lane_free; ++j) {
      Polyline gt = make_lane(rng, j, cfg.lanes_per_image, cfg.canvas, vanish_x, top_y);
      Polyline pred = gt;
      if (cfg.noise_sigma > 0.0) {
        for (Point& p : pred) p.x = rng.normal(p.x, cfg.noise_sigma);
      }
      const bool dropped = cfg.drop_prob > 0.0 && rng.bernoulli(cfg.drop_prob);
      img.gt.push_back(std::move(gt));
      if (!dropped) img.pred.push_back(std::move(pred));
    }
    images.push_back(std::move(img));
  }
  return images;
}

void write_synthetic_tree(const std::vector<SynthImage>& images, const SynthConfig& cfg,
                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory " + out_dir.string());
  }
  std::string list;
  std::map<Category, std::string> category_lists;
  for (const SynthImage& img : images) {
    const std::string image_path = "/" + img.stem + ".jpg";
    list += image_path + "\n";
    write_text(out_dir / "gt" / (img.stem + ".lines.txt"), format_culane_polylines(img.gt));
    write_text(out_dir / "pred" / (img.stem + ".lines.txt"), format_culane_polylines(img.pred));
    if (img.category) category_lists[*img.category] += image_path + "\n";
  }
  write_text(out_dir / "list.txt", list);
  if (cfg.with_categories) {
    for (Category c : kAllCategories) {
      write_text(out_dir / "categories" / category_list_file(c), category_lists[c]);
    }
  }
  nlohmann::ordered_json manifest;
  manifest["generator"] = "lanebench gen-synth";
  manifest["seed"] = cfg.seed;
  manifest["images"] = cfg.images;
  manifest["lanes_per_image"] = cfg.lanes_per_image;
  manifest["noise_sigma"] = cfg.noise_sigma;
  manifest["drop_prob"] = cfg.drop_prob;
  manifest["canvas"] = {{"width", cfg.canvas.width}, {"height", cfg.canvas.height}};
  manifest["with_categories"] = cfg.with_categories;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<EvalImage> synthetic_eval_images(const std::vector<SynthImage>& images, const YGrid& grid) {
  auto to_lanes = [&](const std::vector<Polyline>& lines) {
    std::vector<Lane> lanes;
    for (const Polyline& p : lines) {
      try {
        lanes.push_back(resample_to_grid(p, grid));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kUnrepresentableLane) throw;
      }
    }
    return lanes;
  };
  std::vector<EvalImage> out;
  out.reserve(images.size());
  for (const SynthImage& img : images) {
    out.push_back({img.stem, to_lanes(img.gt), to_lanes(img.pred), img.category});
  }
  return out;
}

}  // namespace lanebench
