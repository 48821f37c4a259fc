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

#include "lanebench/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lanebench/error.hpp"

namespace lanebench {

const char* backend_name(IouBackend backend) {
  return backend == IouBackend::kMask ? "mask" : "liou";
}

std::optional<IouBackend> parse_backend(std::string_view name) {
  if (name == "mask") return IouBackend::kMask;
  if (name == "liou") return IouBackend::kLIoU;
  return std::nullopt;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::kNormal: return "normal";
    case Category::kCrowded: return "crowded";
    case Category::kDazzle: return "dazzle";
    case Category::kShadow: return "shadow";
    case Category::kNoLine: return "noline";
    case Category::kArrow: return "arrow";
    case Category::kCurve: return "curve";
    case Category::kNight: return "night";
    case Category::kCross: return "cross";
  }
  return "unknown";
}

const char* category_list_file(Category c) {
  switch (c) {
    case Category::kNormal: return "test0_normal.txt";
    case Category::kCrowded: return "test1_crowd.txt";
    case Category::kDazzle: return "test2_hlight.txt";
    case Category::kShadow: return "test3_shadow.txt";
    case Category::kNoLine: return "test4_noline.txt";
    case Category::kArrow: return "test5_arrow.txt";
    case Category::kCurve: return "test6_curve.txt";
    case Category::kCross: return "test7_cross.txt";
    case Category::kNight: return "test8_night.txt";
  }
  return "unknown";
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int k = 50; k <= 95; k += 5) t.push_back(k / 100.0);
  return t;
}

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw_invalid("bad threshold value '" + std::string(s) + "'");
  }
  return v;
}

double snap(double v) { return std::round(v * 1e9) / 1e9; }

void check_thresholds(const std::vector<double>& t) {
  if (t.empty()) throw Error(ErrorKind::kConfig, "threshold list is empty");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0 && t[k] <= 1.0)) throw Error(ErrorKind::kConfig, "thresholds must lie in (0, 1]");
    if (k > 0 && !(t[k] > t[k - 1])) throw Error(ErrorKind::kConfig, "thresholds must be strictly ascending");
  }
}

}  // namespace

std::vector<double> parse_thresholds(std::string_view spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string_view::npos) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    if (b == std::string_view::npos) throw_invalid("threshold range must be start:step:stop");
    const double start = parse_real(spec.substr(0, a));
    const double step = parse_real(spec.substr(a + 1, b - a - 1));
    const double stop = parse_real(spec.substr(b + 1));
    if (!(step > 0.0)) throw_invalid("threshold step must be positive");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(snap(start + static_cast<double>(k) * step));
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = spec.find(',', pos);
      const auto end = comma == std::string_view::npos ? spec.size() : comma;
      out.push_back(parse_real(spec.substr(pos, end - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  check_thresholds(out);
  return out;
}

void EvalConfig::validate() const {
  if (!(mask_width > 0.0)) throw Error(ErrorKind::kConfig, "mask width must be positive");
  if (!(radius_e > 0.0)) throw Error(ErrorKind::kConfig, "LIoU radius must be positive");
  if (canvas.width <= 0 || canvas.height <= 0) throw Error(ErrorKind::kConfig, "canvas must be non-empty");
  if (n_points < 2) throw Error(ErrorKind::kConfig, "grid needs at least 2 points");
  check_thresholds(thresholds);
}

namespace {

LIoUConfig eval_liou_config(const EvalConfig& cfg) {
  return {cfg.radius_e, LIoUVariant::kLinear, cfg.liou_validity};
}

double clamped_liou(const Lane& pred, const Lane& gt, const LIoUConfig& lcfg) {
  try {
    return std::clamp(liou(pred, gt, lcfg), 0.0, 1.0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoOverlapDomain) throw;
    return 0.0;
  }
}

Matrix liou_matrix(const std::vector<Lane>& gt, const std::vector<Lane>& pred, const EvalConfig& cfg) {
  const LIoUConfig lcfg = eval_liou_config(cfg);
  Matrix m(gt.size(), pred.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) m(g, p) = clamped_liou(pred[p], gt[g], lcfg);
  }
  return m;
}

std::vector<LaneMask> rasterize_all(const std::vector<Lane>& lanes, const YGrid& grid, const EvalConfig& cfg) {
  std::vector<LaneMask> masks;
  masks.reserve(lanes.size());
  for (const Lane& lane : lanes) {
    const Polyline pts = lane.points(grid);
    masks.push_back(rasterize_lane(pts, cfg.mask_width, cfg.canvas));
  }
  return masks;
}

Matrix reference_iou_matrix(const std::vector<Lane>& gt, const std::vector<Lane>& pred, const EvalConfig& cfg) {
  if (cfg.backend == IouBackend::kLIoU) return liou_matrix(gt, pred, cfg);
  const YGrid grid = cfg.grid();
  auto bitmaps = [&](const std::vector<Lane>& lanes) {
    std::vector<std::vector<std::uint8_t>> out;
    for (const Lane& lane : lanes) {
      const Polyline pts = lane.points(grid);
      out.push_back(reference_bitmap(pts, cfg.mask_width, cfg.canvas));
    }
    return out;
  };
  const auto gb = bitmaps(gt);
  const auto pb = bitmaps(pred);
  Matrix m(gt.size(), pred.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) m(g, p) = reference_bitmap_iou(gb[g], pb[p]);
  }
  return m;
}

std::vector<MatchCounts> counts_for(const Matrix& iou, const EvalConfig& cfg) {
  std::vector<MatchCounts> out;
  out.reserve(cfg.thresholds.size());
  for (double tau : cfg.thresholds) out.push_back(match_lanes(iou, tau));
  return out;
}

std::size_t key_threshold_index(const std::vector<double>& thresholds) {
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (std::abs(thresholds[k] - 0.5) < 1e-9) return k;
  }
  return 0;
}

// Ordered, single-threaded reduction of per-image counts.
EvalReport assemble_report(std::span<const EvalImage> images,
                           const std::vector<std::vector<MatchCounts>>& per_image, const EvalConfig& cfg) {
  const std::size_t nt = cfg.thresholds.size();
  std::vector<MatchCounts> overall(nt);
  std::map<Category, std::pair<std::vector<MatchCounts>, std::uint64_t>> by_category;
  const std::size_t key = key_threshold_index(cfg.thresholds);
  EvalReport report;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& counts = per_image[i];
    for (std::size_t k = 0; k < nt; ++k) overall[k] = merge_counts(overall[k], counts[k]);
    if (const auto cat = images[i].category) {
      auto& [cat_counts, n] = by_category[*cat];
      cat_counts.resize(nt);
      for (std::size_t k = 0; k < nt; ++k) cat_counts[k] = merge_counts(cat_counts[k], counts[k]);
      ++n;
      if (*cat == Category::kCross) report.cross_fp += counts[key].fp;
    }
  }
  report.overall = build_metric_table(cfg.thresholds, overall, images.size());
  for (const auto& [cat, entry] : by_category) {
    report.categories[cat] = build_metric_table(cfg.thresholds, entry.first, entry.second);
  }
  return report;
}

}  // namespace

double lane_mask_iou(const Lane& a, const Lane& b, const EvalConfig& cfg) {
  const YGrid grid = cfg.grid();
  const Polyline pa = a.points(grid);
  const Polyline pb = b.points(grid);
  return mask_iou(rasterize_lane(pa, cfg.mask_width, cfg.canvas), rasterize_lane(pb, cfg.mask_width, cfg.canvas));
}

Matrix pairwise_iou(const std::vector<Lane>& gt, const std::vector<Lane>& pred, const EvalConfig& cfg) {
  for (const auto* set : {&gt, &pred}) {
    for (const Lane& lane : *set) {
      if (lane.size() != cfg.n_points) throw_invalid("lane is not on the evaluation grid");
    }
  }
  if (cfg.backend == IouBackend::kLIoU) return liou_matrix(gt, pred, cfg);
  const YGrid grid = cfg.grid();
  const auto gm = rasterize_all(gt, grid, cfg);
  const auto pm = rasterize_all(pred, grid, cfg);
  Matrix m(gt.size(), pred.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) m(g, p) = mask_iou(gm[g], pm[p]);
  }
  return m;
}

std::vector<MatchCounts> evaluate_image(const EvalImage& image, const EvalConfig& cfg) {
  return counts_for(pairwise_iou(image.gt, image.pred, cfg), cfg);
}

EvalReport evaluate_images(std::span<const EvalImage> images, const EvalConfig& cfg, int jobs) {
  cfg.validate();
  if (jobs < 1) throw Error(ErrorKind::kConfig, "jobs must be at least 1");
  std::vector<std::vector<MatchCounts>> per_image(images.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(images.size());
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      per_image[static_cast<std::size_t>(i)] = evaluate_image(images[static_cast<std::size_t>(i)], cfg);
    } catch (...) {
#pragma omp critical(lanebench_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble_report(images, per_image, cfg);
}

EvalReport evaluate_images_reference(std::span<const EvalImage> images, const EvalConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<MatchCounts>> per_image;
  per_image.reserve(images.size());
  for (const EvalImage& image : images) {
    per_image.push_back(counts_for(reference_iou_matrix(image.gt, image.pred, cfg), cfg));
  }
  return assemble_report(images, per_image, cfg);
}

EvalReport evaluate_dataset(const std::map<std::string, std::vector<Lane>>& gt,
                            const std::map<std::string, std::vector<ScoredLane>>& pred,
                            const std::map<std::string, Category>* categories, const EvalConfig& cfg,
                            int jobs) {
  std::vector<std::string> dangling;
  for (const auto& [key, lanes] : pred) {
    if (!gt.contains(key)) dangling.push_back(key);
  }
  if (!dangling.empty()) throw DanglingPredictionError(std::move(dangling));

  std::vector<EvalImage> images;
  images.reserve(gt.size());
  for (const auto& [key, lanes] : gt) {
    EvalImage img;
    img.key = key;
    img.gt = lanes;
    if (const auto it = pred.find(key); it != pred.end()) {
      for (const auto& s : it->second) img.pred.push_back(s.lane);
    }
    if (categories != nullptr) {
      if (const auto it = categories->find(key); it != categories->end()) img.category = it->second;
    }
    images.push_back(std::move(img));
  }
  return evaluate_images(images, cfg, jobs);
}

}  // namespace lanebench
