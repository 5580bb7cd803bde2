// Copyright 2026 The HSBM Toolkit Authors.
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

#include "hsbm/common.h"

#include <sstream>

namespace hsbm {
namespace {

std::string FormatParseError(const std::string& file, int64_t line,
                             int64_t column, const std::string& what) {
  std::ostringstream os;
  os << file;
  if (line > 0) os << ":" << line;
  if (column > 0) os << ":" << column;
  os << ": " << what;
  return os.str();
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInfeasibleModel: return "InfeasibleModel";
    case ErrorCode::kDimension: return "DimensionError";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kAssumptionViolation: return "AssumptionViolation";
    case ErrorCode::kDegeneratePattern: return "DegeneratePattern";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kShape: return "ShapeError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

ParseError::ParseError(const std::string& file, int64_t line, int64_t column,
                       const std::string& what)
    : Error(ErrorCode::kParse, FormatParseError(file, line, column, what)),
      line_(line),
      column_(column) {}

}  // namespace hsbm
