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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lanebench/assign_nms.hpp"
#include "lanebench/bench_io.hpp"
#include "lanebench/culane_dataset.hpp"
#include "lanebench/error.hpp"
#include "lanebench/evaluator.hpp"
#include "lanebench/liou.hpp"
#include "lanebench/render.hpp"
#include "lanebench/synth.hpp"

namespace fs = std::filesystem;
using namespace lanebench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitMissing = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kDanglingPrediction:
      return kExitMissing;
    case ErrorKind::kParse:
    case ErrorKind::kMalformedLane:
    case ErrorKind::kSchema:
      return kExitMalformed;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kConfig:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

int default_jobs() {
  if (const char* env = std::getenv("LANEBENCH_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::kConfig, std::string("LANEBENCH_JOBS must be a positive integer, got '") + env + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw Error(ErrorKind::kIo, "no such file: " + p.string());
}

void write_output(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

std::vector<Polyline> load_polylines(const fs::path& path) {
  require_file(path);
  try {
    return parse_culane_lines(read_file(path));
  } catch (const LineError& e) {
    throw LineError(e.kind(), e.line(), path.string() + ": " + e.what());
  }
}

struct EvalOptions {
  std::string backend = "mask";
  double width = 30.0;
  double radius = 15.0;
  std::string thresholds = "0.5:0.05:0.95";
  int jobs = 0;
  std::string output;
  std::string format = "json";
  int canvas_width = 1640;
  int canvas_height = 590;

  EvalConfig config() const {
    EvalConfig cfg;
    const auto b = parse_backend(backend);
    if (!b) throw Error(ErrorKind::kConfig, "unknown backend '" + backend + "'");
    cfg.backend = *b;
    cfg.mask_width = width;
    cfg.radius_e = radius;
    cfg.thresholds = parse_thresholds(thresholds);
    cfg.canvas = {canvas_width, canvas_height};
    cfg.validate();
    return cfg;
  }
};

void add_eval_options(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--backend", o.backend, "IoU backend: mask or liou")->check(CLI::IsMember({"mask", "liou"}));
  cmd->add_option("--width", o.width, "Mask stroke width in pixels");
  cmd->add_option("--radius", o.radius, "LIoU extension radius e in pixels");
  cmd->add_option("--thresholds", o.thresholds, "IoU thresholds, start:step:stop or a comma list");
  cmd->add_option("--jobs", o.jobs, "Worker count (default: LANEBENCH_JOBS or logical cores)")->check(CLI::PositiveNumber);
  cmd->add_option("--output", o.output, "Report path");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--canvas-width", o.canvas_width, "Image width in pixels");
  cmd->add_option("--canvas-height", o.canvas_height, "Image height in pixels");
}

std::string fmt4(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

void emit_report(const EvalReport& report, const EvalConfig& cfg, const EvalOptions& o) {
  if (!o.output.empty()) {
    const fs::path out(o.output);
    if (o.format == "json" || o.format == "both") write_output(out, report_to_json(report, cfg));
    if (o.format == "csv") write_output(out, report_to_csv(report));
    if (o.format == "both") {
      fs::path csv = out;
      csv.replace_extension(".csv");
      if (csv == out) csv += ".csv";
      write_output(csv, report_to_csv(report));
    }
  }
  std::cout << "F1@50 " << fmt4(report.overall.f1_at_50) << " F1@75 " << fmt4(report.overall.f1_at_75) << " mF1 "
            << fmt4(report.overall.mf1) << "\n";
}

int run_eval_culane(const EvalOptions& o, const std::string& gt_root, const std::string& pred_root,
                    const std::string& list_file, const std::string& category_dir) {
  const EvalConfig cfg = o.config();
  const int jobs = o.jobs > 0 ? o.jobs : default_jobs();
  CulaneLayout layout{gt_root, pred_root, list_file, std::nullopt};
  if (!category_dir.empty()) {
    if (!fs::is_directory(category_dir)) throw Error(ErrorKind::kIo, "not a directory: " + category_dir);
    layout.category_dir = category_dir;
  }
  require_file(layout.list_file);
  const CulaneDataset ds = load_culane_dataset(layout, cfg.grid(), jobs);
  if (ds.dropped_lanes > 0) {
    std::cerr << "note: dropped " << ds.dropped_lanes << " lane(s) that cover no grid row\n";
  }
  const EvalReport report =
      evaluate_dataset(ds.gt, ds.pred, layout.category_dir ? &ds.categories : nullptr, cfg, jobs);
  emit_report(report, cfg, o);
  return 0;
}

std::vector<TusimpleRecord> load_tusimple(const fs::path& path) {
  require_file(path);
  std::ifstream in(path);
  std::vector<TusimpleRecord> records;
  try {
    for_each_tusimple_record(in, [&](TusimpleRecord&& r) { records.push_back(std::move(r)); });
  } catch (const LineError& e) {
    throw LineError(e.kind(), e.line(), path.string() + ": " + e.what());
  }
  return records;
}

int run_eval_tusimple(const std::string& gt_file, const std::string& pred_file, const std::string& output,
                      double tolerance, double fraction) {
  const auto gt = load_tusimple(gt_file);
  const auto pred = load_tusimple(pred_file);
  const TusimpleMetrics m = tusimple_metrics(gt, pred, tolerance, fraction);
  if (!output.empty()) write_output(output, tusimple_metrics_to_json(m, tolerance, fraction));
  std::printf("Accuracy %.4f FP %.4f FN %.4f F1 %.4f\n", m.accuracy, m.fp_rate, m.fn_rate, m.f1);
  return 0;
}

int run_liou(const std::string& pred_file, const std::string& gt_file, double radius, const std::string& variant,
             const std::string& validity, int n_points, int canvas_height) {
  const YGrid grid(n_points, canvas_height);
  std::size_t dropped = 0;
  const auto pred = lanes_on_grid(load_polylines(pred_file), grid, dropped);
  const auto gt = lanes_on_grid(load_polylines(gt_file), grid, dropped);
  if (dropped > 0) std::cerr << "note: dropped " << dropped << " lane(s) that cover no grid row\n";
  LIoUConfig cfg;
  cfg.radius_e = radius;
  cfg.variant = variant == "squared" ? LIoUVariant::kSquared : LIoUVariant::kLinear;
  cfg.validity = validity == "union" ? ValidityMode::kUnionPenalized : ValidityMode::kCommonOnly;
  if (!(radius > 0.0)) throw Error(ErrorKind::kConfig, "radius must be positive");
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      std::printf("pred %zu gt %zu ", p, g);
      try {
        const double v = liou(pred[p], gt[g], cfg);
        std::printf("liou %.6f loss %.6f\n", v, 1.0 - v);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoOverlapDomain) throw;
        std::printf("liou n/a\n");
      }
    }
  }
  return 0;
}

// "score x y x y ..." per line.
std::vector<std::pair<double, Polyline>> parse_scored_lines(const fs::path& path) {
  require_file(path);
  std::istringstream in(read_file(path));
  std::vector<std::pair<double, Polyline>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string score_tok;
    if (!(ls >> score_tok)) continue;
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(score_tok, &used);
      if (used != score_tok.size()) throw std::invalid_argument(score_tok);
    } catch (const std::exception&) {
      throw LineError(ErrorKind::kParse, line_no, path.string() + ": bad score '" + score_tok + "'");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      throw LineError(ErrorKind::kMalformedLane, line_no, path.string() + ": score outside [0, 1]");
    }
    std::string rest;
    std::getline(ls, rest);
    try {
      auto lanes = parse_culane_lines(rest);
      if (lanes.size() != 1) throw LineError(ErrorKind::kMalformedLane, 1, "lane has no points");
      out.emplace_back(score, std::move(lanes.front()));
    } catch (const LineError& e) {
      std::string what = e.what();
      what = what.substr(what.find(": ") + 2);
      throw LineError(e.kind(), line_no, path.string() + ": " + what);
    }
  }
  return out;
}

int run_nms(const std::string& input, const std::string& output, double threshold, std::size_t keep_max,
            double radius, int n_points, int canvas_height) {
  if (!(radius > 0.0)) throw Error(ErrorKind::kConfig, "radius must be positive");
  const YGrid grid(n_points, canvas_height);
  const auto scored = parse_scored_lines(input);
  std::vector<ScoredLane> candidates;
  std::vector<std::size_t> source;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    try {
      candidates.push_back({resample_to_grid(scored[i].second, grid), scored[i].first});
      source.push_back(i);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnrepresentableLane) throw;
    }
  }
  LIoUConfig cfg;
  cfg.radius_e = radius;
  std::vector<double> scores;
  for (const auto& c : candidates) scores.push_back(c.score);
  const auto kept = greedy_nms(scores, threshold, keep_max, [&](std::size_t a, std::size_t b) {
    try {
      return liou(candidates[a].lane, candidates[b].lane, cfg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoOverlapDomain) throw;
      return -1.0;
    }
  });
  // Kept lanes keep their original polylines, in descending score order.
  std::string text;
  for (std::size_t k : kept) {
    const auto& [score, poly] = scored[source[k]];
    std::string lane_text = format_culane_polylines({poly});
    if (!lane_text.empty() && lane_text.back() == '\n') lane_text.pop_back();
    text += format_coordinate(score) + " " + lane_text + "\n";
  }
  write_output(output.empty() ? input : output, text);
  std::cerr << "kept " << kept.size() << " of " << scored.size() << " candidate(s)\n";
  return 0;
}

int run_render(const std::string& gt_file, const std::string& pred_file, const std::string& output, double width,
               int canvas_width, int canvas_height) {
  const auto gt = load_polylines(gt_file);
  const auto pred = pred_file.empty() ? std::vector<Polyline>{} : load_polylines(pred_file);
  write_output(output, render_overlay_svg(gt, pred, Canvas{canvas_width, canvas_height}, width));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane benchmark evaluation and geometry toolkit"};
  app.require_subcommand(1);

  EvalOptions eval;
  std::string gt_root, pred_root, list_file, category_dir;
  auto* culane = app.add_subcommand("eval-culane", "Evaluate CULane-format predictions");
  culane->add_option("--gt-root", gt_root, "Ground-truth tree")->required();
  culane->add_option("--pred-root", pred_root, "Prediction tree")->required();
  culane->add_option("--list-file", list_file, "Image list")->required();
  culane->add_option("--category-dir", category_dir, "Directory with the nine category list files");
  add_eval_options(culane, eval);

  std::string ts_gt, ts_pred, ts_out;
  double ts_tol = 20.0, ts_frac = 0.85;
  auto* tusimple = app.add_subcommand("eval-tusimple", "Evaluate TuSimple JSON-lines predictions");
  tusimple->add_option("--gt-file", ts_gt, "Ground-truth JSON lines")->required();
  tusimple->add_option("--pred-file", ts_pred, "Prediction JSON lines")->required();
  tusimple->add_option("--output", ts_out, "Report path");
  tusimple->add_option("--point-tolerance", ts_tol, "Pixel tolerance for a correct point");
  tusimple->add_option("--lane-fraction", ts_frac, "Correct-point fraction for a matched lane");

  std::string li_pred, li_gt, li_variant = "linear", li_validity = "common";
  double li_radius = 15.0;
  int n_points = 72, canvas_height = 590, canvas_width = 1640;
  auto* liou_cmd = app.add_subcommand("liou", "Pairwise LIoU between two lane files");
  liou_cmd->add_option("--pred", li_pred, "Predicted lanes (.lines.txt)")->required();
  liou_cmd->add_option("--gt", li_gt, "Ground-truth lanes (.lines.txt)")->required();
  liou_cmd->add_option("--radius", li_radius, "Extension radius e in pixels");
  liou_cmd->add_option("--variant", li_variant)->check(CLI::IsMember({"linear", "squared"}));
  liou_cmd->add_option("--validity", li_validity)->check(CLI::IsMember({"common", "union"}));
  liou_cmd->add_option("--n-points", n_points, "Grid rows");
  liou_cmd->add_option("--canvas-height", canvas_height, "Image height in pixels");

  std::string nms_in, nms_out;
  double nms_thr = 0.5, nms_radius = 15.0;
  std::size_t nms_keep = 4;
  auto* nms = app.add_subcommand("nms", "Line NMS over a scored lane file");
  nms->add_option("--input", nms_in, "Scored lanes, one 'score x y ...' per line")->required();
  nms->add_option("--output", nms_out, "Output path (default: rewrite the input)");
  nms->add_option("--threshold", nms_thr, "LIoU suppression threshold");
  nms->add_option("--keep-max", nms_keep, "Maximum lanes kept");
  nms->add_option("--radius", nms_radius, "Extension radius e in pixels");
  nms->add_option("--n-points", n_points, "Grid rows");
  nms->add_option("--canvas-height", canvas_height, "Image height in pixels");

  SynthConfig synth;
  std::string synth_out;
  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic CULane-format fixture");
  gen->add_option("--out-dir", synth_out, "Output directory")->required();
  gen->add_option("--images", synth.images, "Image count");
  gen->add_option("--lanes-per-image", synth.lanes_per_image, "Lanes per image");
  gen->add_option("--noise-sigma", synth.noise_sigma, "Per-point x noise in pixels");
  gen->add_option("--drop-prob", synth.drop_prob, "Probability of dropping a predicted lane");
  gen->add_option("--seed", synth.seed, "Random seed");
  gen->add_flag("--categories", synth.with_categories, "Assign images to the nine categories");

  std::string r_gt, r_pred, r_out;
  double r_width = 30.0;
  auto* render = app.add_subcommand("render", "SVG overlay of ground truth and predictions");
  render->add_option("--gt", r_gt, "Ground-truth lanes (.lines.txt)")->required();
  render->add_option("--pred", r_pred, "Predicted lanes (.lines.txt)");
  render->add_option("--output", r_out, "SVG path")->required();
  render->add_option("--width", r_width, "Stroke width in pixels");
  render->add_option("--canvas-width", canvas_width, "Image width in pixels");
  render->add_option("--canvas-height", canvas_height, "Image height in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*culane) return run_eval_culane(eval, gt_root, pred_root, list_file, category_dir);
    if (*tusimple) return run_eval_tusimple(ts_gt, ts_pred, ts_out, ts_tol, ts_frac);
    if (*liou_cmd) return run_liou(li_pred, li_gt, li_radius, li_variant, li_validity, n_points, canvas_height);
    if (*nms) return run_nms(nms_in, nms_out, nms_thr, nms_keep, nms_radius, n_points, canvas_height);
    if (*gen) {
      synth.canvas = {canvas_width, canvas_height};
      validate_synth_config(synth);
      write_synthetic_tree(generate_synthetic(synth), synth, synth_out);
      return 0;
    }
    if (*render) return run_render(r_gt, r_pred, r_out, r_width, canvas_width, canvas_height);
  } catch (const DanglingPredictionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
