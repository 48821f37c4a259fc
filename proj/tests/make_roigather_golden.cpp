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

// Writes the ROIGather golden fixture: seeded inputs, weights and the forward
// output. Run once; the committed file is the reference from then on.

#include <cstdio>

#include "golden_case.hpp"
#include "lanebench/synth.hpp"

using namespace lanebench;

namespace {

Tensor random_tensor(SynthRng& rng, std::vector<std::size_t> dims, double scale) {
  Tensor t{std::move(dims), {}};
  t.values.resize(t.element_count());
  for (double& v : t.values) v = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s OUT.lbgw\n", argv[0]);
    return 1;
  }
  SynthRng rng(20260101);
  constexpr std::size_t kC = 8;
  constexpr std::size_t kNp = 36;
  TensorFile file;
  file.put("fmap_current", random_tensor(rng, {kC, 20, 50}, 1.0));
  file.put("fmap_coarse", random_tensor(rng, {kC, 10, 25}, 1.0));
  file.put("prior_scalars", Tensor{{4}, {612.5, 0.0, 1.2, 60.0}});
  file.put("prior_offsets", random_tensor(rng, {72}, 4.0));
  file.put("pool", Tensor{{4}, {static_cast<double>(kNp), 10.0, 25.0, 1640.0}});
  const GatherWeights w{random_tensor(rng, {kC, 2 * kC, 9}, 0.1), random_tensor(rng, {kC, kC * kNp}, 0.05),
                        random_tensor(rng, {kC}, 0.5)};
  for (auto& [name, t] : gather_weights_to_file(w).tensors) file.put(name, t);

  const auto c = testing::golden_case_from_file(file);
  const auto out = roigather_forward(c.fmaps, c.prior, c.grid, c.pool, c.weights);
  file.put("expected_out", Tensor{{out.size()}, out});
  write_tensor_file(argv[1], file);
  return 0;
}
