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

#include <algorithm>
#include <cmath>

#include "lanebench/error.hpp"
#include "lanebench/evaluator.hpp"

namespace lanebench {

MatchCounts merge_counts(const MatchCounts& a, const MatchCounts& b) {
  return {a.tp + b.tp, a.fp + b.fp, a.fn + b.fn};
}

Prf f1_from_counts(const MatchCounts& c) {
  Prf out;
  const auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(c.tp, c.tp + c.fp);
  out.recall = ratio(c.tp, c.tp + c.fn);
  const double denom = out.precision + out.recall;
  out.f1 = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

std::vector<std::pair<int, int>> matched_pairs(const Matrix& iou, double tau) {
  const std::size_t g = iou.rows();
  const std::size_t p = iou.cols();
  std::vector<std::pair<int, int>> pairs;
  if (g == 0 || p == 0) return pairs;
  // Each admissible pair is worth big + iou with big > min(g, p), so one
  // more matched pair always outweighs any gain in summed IoU.
  const double big = static_cast<double>(std::min(g, p)) + 1.0;
  Matrix cost(g, p, 0.0);
  bool any = false;
  for (std::size_t r = 0; r < g; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      const double v = iou(r, c);
      if (!std::isfinite(v)) throw_invalid("IoU matrix holds a non-finite value");
      if (v >= tau) {
        cost(r, c) = -(big + v);
        any = true;
      }
    }
  }
  if (!any) return pairs;
  const std::vector<int> assign = solve_min_cost_assignment(cost);
  for (std::size_t r = 0; r < g; ++r) {
    const int c = assign[r];
    if (c >= 0 && iou(r, static_cast<std::size_t>(c)) >= tau) pairs.emplace_back(static_cast<int>(r), c);
  }
  return pairs;
}

MatchCounts match_lanes(const Matrix& iou, double tau) {
  const auto tp = static_cast<std::uint64_t>(matched_pairs(iou, tau).size());
  return {tp, iou.cols() - tp, iou.rows() - tp};
}

MetricTable build_metric_table(std::span<const double> thresholds, std::span<const MatchCounts> counts,
                               std::uint64_t images) {
  if (thresholds.size() != counts.size()) throw_invalid("threshold and count tables differ in length");
  MetricTable t;
  t.images = images;
  double f1_sum = 0.0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    ThresholdRow row{thresholds[k], counts[k], f1_from_counts(counts[k])};
    t.totals = merge_counts(t.totals, row.counts);
    f1_sum += row.prf.f1;
    if (std::abs(row.iou - 0.50) < 1e-9) t.f1_at_50 = row.prf.f1;
    if (std::abs(row.iou - 0.75) < 1e-9) t.f1_at_75 = row.prf.f1;
    t.rows.push_back(row);
  }
  t.totals_prf = f1_from_counts(t.totals);
  t.mf1 = thresholds.empty() ? 0.0 : f1_sum / static_cast<double>(thresholds.size());
  return t;
}

}  // namespace lanebench
