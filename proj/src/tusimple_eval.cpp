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

#include <cmath>
#include <map>

#include <json.hpp>

#include "lanebench/error.hpp"
#include "lanebench/evaluator.hpp"

namespace lanebench {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct ImageTally {
  std::uint64_t gt_points = 0;
  std::uint64_t correct_points = 0;
  std::uint64_t true_matches = 0;
};

ImageTally tally_image(const TusimpleRecord& gt, const TusimpleRecord* pred, double tol, double frac) {
  ImageTally t;
  std::vector<std::uint64_t> gt_valid(gt.lanes.size(), 0);
  for (std::size_t g = 0; g < gt.lanes.size(); ++g) {
    for (double x : gt.lanes[g]) gt_valid[g] += tusimple_point_valid(x);
    t.gt_points += gt_valid[g];
  }
  if (pred == nullptr || pred->lanes.empty() || gt.lanes.empty()) return t;

  // Align predictions to the ground-truth rows by h_sample value.
  std::map<int, std::size_t> pred_row;
  for (std::size_t i = 0; i < pred->h_samples.size(); ++i) pred_row[pred->h_samples[i]] = i;

  const std::size_t ng = gt.lanes.size();
  const std::size_t np = pred->lanes.size();
  std::vector<std::uint64_t> correct(ng * np, 0);
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t i = 0; i < gt.h_samples.size(); ++i) {
      const double xg = gt.lanes[g][i];
      if (!tusimple_point_valid(xg)) continue;
      const auto it = pred_row.find(gt.h_samples[i]);
      if (it == pred_row.end()) continue;
      for (std::size_t p = 0; p < np; ++p) {
        const double xp = pred->lanes[p][it->second];
        if (tusimple_point_valid(xp) && std::abs(xp - xg) < tol) ++correct[g * np + p];
      }
    }
  }

  // Greedy: repeatedly take the pair with the most correct points.
  std::vector<char> g_used(ng, 0), p_used(np, 0);
  for (;;) {
    std::uint64_t best = 0;
    std::size_t bg = 0, bp = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      if (g_used[g]) continue;
      for (std::size_t p = 0; p < np; ++p) {
        if (!p_used[p] && correct[g * np + p] > best) {
          best = correct[g * np + p];
          bg = g;
          bp = p;
        }
      }
    }
    if (best == 0) break;
    g_used[bg] = p_used[bp] = 1;
    t.correct_points += best;
    if (static_cast<double>(best) >= frac * static_cast<double>(gt_valid[bg])) ++t.true_matches;
  }
  return t;
}

}  // namespace

TusimpleMetrics tusimple_metrics(const std::vector<TusimpleRecord>& gt, const std::vector<TusimpleRecord>& pred,
                                 double point_tolerance, double lane_correct_fraction) {
  if (!(point_tolerance > 0.0)) throw_invalid("point tolerance must be positive");
  if (!(lane_correct_fraction > 0.0 && lane_correct_fraction <= 1.0)) {
    throw_invalid("lane correct fraction must lie in (0, 1]");
  }
  std::map<std::string, const TusimpleRecord*> pred_by_key;
  for (const auto& r : pred) pred_by_key[r.raw_file] = &r;
  std::map<std::string, const TusimpleRecord*> gt_by_key;
  for (const auto& r : gt) gt_by_key[r.raw_file] = &r;
  std::vector<std::string> dangling;
  for (const auto& [key, r] : pred_by_key) {
    if (!gt_by_key.contains(key)) dangling.push_back(key);
  }
  if (!dangling.empty()) throw DanglingPredictionError(std::move(dangling));

  TusimpleMetrics m;
  std::uint64_t true_matches = 0;
  for (const auto& [key, g] : gt_by_key) {
    const auto it = pred_by_key.find(key);
    const TusimpleRecord* p = it == pred_by_key.end() ? nullptr : it->second;
    const ImageTally t = tally_image(*g, p, point_tolerance, lane_correct_fraction);
    m.gt_points += t.gt_points;
    m.correct_points += t.correct_points;
    m.gt_lanes += g->lanes.size();
    m.pred_lanes += p == nullptr ? 0 : p->lanes.size();
    true_matches += t.true_matches;
  }
  m.wrong_preds = m.pred_lanes - true_matches;
  m.missed_gts = m.gt_lanes - true_matches;
  m.accuracy = ratio(m.correct_points, m.gt_points);
  m.fp_rate = ratio(m.wrong_preds, m.pred_lanes);
  m.fn_rate = ratio(m.missed_gts, m.gt_lanes);
  m.f1 = f1_from_counts({true_matches, m.wrong_preds, m.missed_gts}).f1;
  return m;
}

std::string tusimple_metrics_to_json(const TusimpleMetrics& m, double point_tolerance,
                                     double lane_correct_fraction) {
  nlohmann::ordered_json doc;
  doc["schema"] = "lanebench.tusimple_report";
  doc["version"] = kReportSchemaVersion;
  doc["config"] = {{"point_tolerance", point_tolerance}, {"lane_correct_fraction", lane_correct_fraction}};
  doc["accuracy"] = m.accuracy;
  doc["fp_rate"] = m.fp_rate;
  doc["fn_rate"] = m.fn_rate;
  doc["f1"] = m.f1;
  doc["counts"] = {{"gt_points", m.gt_points},   {"correct_points", m.correct_points},
                   {"gt_lanes", m.gt_lanes},     {"pred_lanes", m.pred_lanes},
                   {"wrong_preds", m.wrong_preds}, {"missed_gts", m.missed_gts}};
  return doc.dump(2) + "\n";
}

}  // namespace lanebench
