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

#include "lanebench/error.hpp"

namespace lanebench {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kUnrepresentableLane: return "unrepresentable-lane";
    case ErrorKind::kNoOverlapDomain: return "no-overlap-domain";
    case ErrorKind::kKinkPoint: return "kink-point";
    case ErrorKind::kEmptyLane: return "empty-lane";
    case ErrorKind::kConfig: return "configuration-error";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kMalformedLane: return "malformed-lane";
    case ErrorKind::kSchema: return "schema-error";
    case ErrorKind::kDanglingPrediction: return "dangling-prediction";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

namespace {

std::string join_keys(const std::vector<std::string>& keys) {
  std::string out = "predictions without ground truth:";
  for (const auto& k : keys) {
    out += ' ';
    out += k;
  }
  return out;
}

}  // namespace

DanglingPredictionError::DanglingPredictionError(std::vector<std::string> keys)
    : Error(ErrorKind::kDanglingPrediction, join_keys(keys)), keys_(std::move(keys)) {}

}  // namespace lanebench
