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

#include "lanebench/assign_nms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanebench/error.hpp"

namespace lanebench {

double assignment_cost(const LanePrior& prior, const Lane& gt, const YGrid& grid,
                       const LossWeights& w, const LIoUConfig& liou_cfg, const ExtraCostFn& extra) {
  validate_weights(w);
  const Lane lane = prior_to_lane(prior, grid);
  double sim = 1.0;
  try {
    sim = (1.0 - liou(lane, gt, liou_cfg)) / 2.0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoOverlapDomain) throw;
  }
  double cost = w.w_cls * (1.0 - prior.fg_prob) + w.w_sim * sim;
  if (extra) cost += extra(prior, lane, gt);
  return std::max(0.0, cost);
}

int dynamic_k_from_ious(std::span<const double> iou_row, int k_max) {
  std::vector<double> row(iou_row.begin(), iou_row.end());
  const auto top = std::min(row.size(), static_cast<std::size_t>(std::max(k_max, 0)));
  std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(top), row.end(),
                    std::greater<>());
  const double sum = std::accumulate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(top), 0.0);
  return std::clamp(static_cast<int>(std::lround(sum)), 1, std::max(1, k_max));
}

namespace {

Assignment finish(std::vector<std::pair<int, int>> pairs, std::size_t n_priors) {
  Assignment out;
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> taken(n_priors, 0);
  for (const auto& [g, p] : pairs) taken[static_cast<std::size_t>(p)] = 1;
  for (std::size_t p = 0; p < n_priors; ++p) {
    if (!taken[p]) out.unmatched_priors.push_back(static_cast<int>(p));
  }
  out.pairs = std::move(pairs);
  return out;
}

Assignment one_to_one(const Matrix& cost) {
  const std::vector<int> row_to_col = solve_min_cost_assignment(cost);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t g = 0; g < row_to_col.size(); ++g) {
    if (row_to_col[g] >= 0) pairs.emplace_back(static_cast<int>(g), row_to_col[g]);
  }
  return finish(std::move(pairs), cost.cols());
}

}  // namespace

Assignment dynamic_topk_assign(const Matrix& cost, const Matrix& iou, const AssignmentConfig& cfg) {
  if (cfg.k_max < 1) throw_invalid("k_max must be at least 1");
  if (cost.rows() != iou.rows() || cost.cols() != iou.cols()) {
    throw_invalid("cost and IoU matrices differ in shape");
  }
  const std::size_t n_gt = cost.rows();
  const std::size_t n_prior = cost.cols();
  if (n_prior == 0 || n_gt == 0) return finish({}, n_prior);
  if (cfg.k_max == 1) return one_to_one(cost);

  const DynamicKFn& k_rule = cfg.dynamic_k ? cfg.dynamic_k : DynamicKFn(dynamic_k_from_ious);
  std::vector<std::vector<int>> preference(n_gt);
  std::vector<int> quota(n_gt);
  for (std::size_t g = 0; g < n_gt; ++g) {
    std::vector<double> row(n_prior);
    for (std::size_t p = 0; p < n_prior; ++p) row[p] = iou(g, p);
    quota[g] = std::min(k_rule(row, cfg.k_max), static_cast<int>(n_prior));
    auto& pref = preference[g];
    pref.resize(n_prior);
    std::iota(pref.begin(), pref.end(), 0);
    std::stable_sort(pref.begin(), pref.end(), [&](int a, int b) {
      return cost(g, static_cast<std::size_t>(a)) < cost(g, static_cast<std::size_t>(b));
    });
  }

  // Deferred acceptance: ground truths claim priors in ascending cost; a
  // contested prior stays with the lowest-cost claimant (lower index on ties)
  // and the displaced ground truth refills from its next-cheapest prior.
  constexpr int kFree = -1;
  std::vector<int> owner(n_prior, kFree);
  std::vector<std::size_t> next(n_gt, 0);
  std::vector<int> held(n_gt, 0);
  auto better = [&](std::size_t g, int other, std::size_t p) {
    const double a = cost(g, p);
    const double b = cost(static_cast<std::size_t>(other), p);
    return a < b || (a == b && static_cast<int>(g) < other);
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t g = 0; g < n_gt; ++g) {
      while (held[g] < quota[g] && next[g] < n_prior) {
        const auto p = static_cast<std::size_t>(preference[g][next[g]++]);
        progress = true;
        if (owner[p] == kFree) {
          owner[p] = static_cast<int>(g);
          ++held[g];
        } else if (better(g, owner[p], p)) {
          --held[static_cast<std::size_t>(owner[p])];
          owner[p] = static_cast<int>(g);
          ++held[g];
        }
      }
    }
  }

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t p = 0; p < n_prior; ++p) {
    if (owner[p] != kFree) pairs.emplace_back(owner[p], static_cast<int>(p));
  }
  return finish(std::move(pairs), n_prior);
}

std::vector<std::size_t> greedy_nms(std::span<const double> scores, double overlap_threshold,
                                    std::size_t keep_max,
                                    const std::function<double(std::size_t, std::size_t)>& overlap) {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw_invalid("NMS threshold must lie in (0, 1]");
  }
  if (keep_max == 0) throw_invalid("NMS keep_max must be positive");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    if (kept.size() >= keep_max) break;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return overlap(k, idx) >= overlap_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<ScoredLane> line_nms(const std::vector<ScoredLane>& candidates, double overlap_threshold,
                                 const LIoUConfig& liou_cfg, std::size_t keep_max) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (!(c.score >= 0.0 && c.score <= 1.0)) throw_invalid("NMS scores must lie in [0, 1]");
    scores.push_back(c.score);
  }
  const auto kept = greedy_nms(scores, overlap_threshold, keep_max, [&](std::size_t a, std::size_t b) {
    try {
      return liou(candidates[a].lane, candidates[b].lane, liou_cfg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoOverlapDomain) throw;
      return -1.0;
    }
  });
  std::vector<ScoredLane> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(candidates[k]);
  return out;
}

}  // namespace lanebench
