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

#include "lanebench/tensor_file.hpp"

#include <bit>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "lanebench/error.hpp"

namespace lanebench {

namespace {

constexpr std::string_view kMagic = "LBGW";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  unsigned char byte(std::size_t i) const { return static_cast<unsigned char>(bytes_[i]); }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::kSchema, "tensor file truncated");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t Tensor::element_count() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

const Tensor* TensorFile::find(std::string_view name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Tensor& TensorFile::get(std::string_view name) const {
  const Tensor* t = find(name);
  if (t == nullptr) throw Error(ErrorKind::kSchema, "tensor file lacks '" + std::string(name) + "'");
  return *t;
}

void TensorFile::put(std::string name, Tensor t) {
  for (auto& [n, existing] : tensors) {
    if (n == name) {
      existing = std::move(t);
      return;
    }
  }
  tensors.emplace_back(std::move(name), std::move(t));
}

std::string encode_tensor_file(const TensorFile& file) {
  std::string out(kMagic);
  put_u32(out, TensorFile::kVersion);
  put_u32(out, static_cast<std::uint32_t>(file.tensors.size()));
  put_u32(out, 0);
  for (const auto& [name, t] : file.tensors) {
    if (t.values.size() != t.element_count()) throw_invalid("tensor '" + name + "' size mismatch");
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (std::size_t d : t.dims) put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : t.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

TensorFile decode_tensor_file(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(4) != kMagic) throw Error(ErrorKind::kSchema, "not an LBGW tensor file");
  const std::uint32_t version = r.u32();
  if (version != TensorFile::kVersion) {
    throw Error(ErrorKind::kSchema, "unsupported LBGW version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  r.u32();  // reserved
  TensorFile file;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(r.take(r.u32()));
    Tensor t;
    const std::uint32_t rank = r.u32();
    for (std::uint32_t d = 0; d < rank; ++d) t.dims.push_back(r.u32());
    const std::size_t n = t.element_count();
    if (n > bytes.size() / 8) throw Error(ErrorKind::kSchema, "tensor '" + name + "' too large");
    t.values.reserve(n);
    for (std::size_t k = 0; k < n; ++k) t.values.push_back(r.f64());
    file.tensors.emplace_back(std::move(name), std::move(t));
  }
  if (!r.done()) throw Error(ErrorKind::kSchema, "trailing bytes after tensors");
  return file;
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_tensor_file(ss.str());
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  const std::string bytes = encode_tensor_file(file);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace lanebench
