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
#include <stdexcept>
#include <string>
#include <vector>

namespace lanebench {

// Failure classes surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kUnrepresentableLane,
  kNoOverlapDomain,
  kKinkPoint,
  kEmptyLane,
  kConfig,
  kParse,
  kMalformedLane,
  kSchema,
  kDanglingPrediction,
  kIo,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse-class errors carry the 1-based line number of the offending input.
class LineError : public Error {
 public:
  LineError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DanglingPredictionError : public Error {
 public:
  explicit DanglingPredictionError(std::vector<std::string> keys);

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

}  // namespace lanebench
