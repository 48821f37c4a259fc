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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lanebench {

struct Tensor {
  std::vector<std::size_t> dims;
  std::vector<double> values;

  std::size_t element_count() const;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Named tensors in the LBGW container. All integers are little-endian:
//
//   offset 0   char[4]  magic "LBGW"
//   offset 4   u32      version (1)
//   offset 8   u32      tensor count
//   offset 12  u32      reserved, zero
//   then per tensor:
//     u32 name length, name bytes (no terminator),
//     u32 rank, rank x u32 dims,
//     prod(dims) x f64 values (IEEE-754 binary64, little-endian)
struct TensorFile {
  static constexpr std::uint32_t kVersion = 1;

  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor& get(std::string_view name) const;
  const Tensor* find(std::string_view name) const;
  void put(std::string name, Tensor t);
};

std::string encode_tensor_file(const TensorFile& file);
TensorFile decode_tensor_file(std::string_view bytes);

TensorFile read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const TensorFile& file);

}  // namespace lanebench
