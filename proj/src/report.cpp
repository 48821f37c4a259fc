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

#include <json.hpp>

#include "lanebench/evaluator.hpp"

namespace lanebench {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json threshold_rows(const MetricTable& t) {
  ordered_json rows = ordered_json::array();
  for (const ThresholdRow& r : t.rows) {
    ordered_json row;
    row["iou"] = r.iou;
    row["tp"] = r.counts.tp;
    row["fp"] = r.counts.fp;
    row["fn"] = r.counts.fn;
    row["precision"] = r.prf.precision;
    row["recall"] = r.prf.recall;
    row["f1"] = r.prf.f1;
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json totals(const MetricTable& t) {
  ordered_json out;
  out["tp"] = t.totals.tp;
  out["fp"] = t.totals.fp;
  out["fn"] = t.totals.fn;
  out["precision"] = t.totals_prf.precision;
  out["recall"] = t.totals_prf.recall;
  out["mean_f1"] = t.mf1;
  return out;
}

const char* validity_name(ValidityMode m) {
  return m == ValidityMode::kCommonOnly ? "common_only" : "union_penalized";
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string report_to_json(const EvalReport& report, const EvalConfig& cfg) {
  ordered_json doc;
  doc["schema"] = "lanebench.eval_report";
  doc["version"] = kReportSchemaVersion;

  ordered_json config;
  config["backend"] = backend_name(cfg.backend);
  config["mask_width"] = cfg.mask_width;
  config["radius_e"] = cfg.radius_e;
  config["liou_validity"] = validity_name(cfg.liou_validity);
  config["canvas"] = {{"width", cfg.canvas.width}, {"height", cfg.canvas.height}};
  config["n_points"] = cfg.n_points;
  config["thresholds"] = cfg.thresholds;
  doc["config"] = std::move(config);

  const MetricTable& t = report.overall;
  doc["images"] = t.images;
  doc["summary"] = {{"f1_at_50", optional_number(t.f1_at_50)},
                    {"f1_at_75", optional_number(t.f1_at_75)},
                    {"mf1", t.mf1}};
  doc["thresholds"] = threshold_rows(t);
  doc["totals"] = totals(t);
  doc["cross_fp"] = report.cross_fp;

  ordered_json cats = ordered_json::array();
  for (const auto& [cat, table] : report.categories) {
    ordered_json c;
    c["name"] = category_name(cat);
    c["images"] = table.images;
    c["f1_at_50"] = optional_number(table.f1_at_50);
    c["f1_at_75"] = optional_number(table.f1_at_75);
    c["mf1"] = table.mf1;
    c["thresholds"] = threshold_rows(table);
    c["totals"] = totals(table);
    cats.push_back(std::move(c));
  }
  doc["categories"] = std::move(cats);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "iou,f1,tp,fp,fn,precision,recall\n";
  const MetricTable& t = report.overall;
  for (const ThresholdRow& r : t.rows) {
    out += fixed6(r.iou) + ',' + fixed6(r.prf.f1) + ',' + std::to_string(r.counts.tp) + ',' +
           std::to_string(r.counts.fp) + ',' + std::to_string(r.counts.fn) + ',' + fixed6(r.prf.precision) +
           ',' + fixed6(r.prf.recall) + '\n';
  }
  out += "mean," + fixed6(t.mf1) + ',' + std::to_string(t.totals.tp) + ',' + std::to_string(t.totals.fp) + ',' +
         std::to_string(t.totals.fn) + ',' + fixed6(t.totals_prf.precision) + ',' +
         fixed6(t.totals_prf.recall) + '\n';
  return out;
}

}  // namespace lanebench
