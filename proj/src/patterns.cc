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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hsbm/model.h"

namespace hsbm {
namespace {

// Tolerates round-off at the family boundaries (a = 1/3 and so on).
constexpr double kBoundaryTol = 1e-12;

double Clamp0(double v) { return std::abs(v) < kBoundaryTol ? 0.0 : v; }

double ParseNumber(const std::string& text, const std::string& context) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot parse number '" + text + "' in " + context);
  }
}

Matrix LoadPatternFile(const std::string& path, int c) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open pattern file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int64_t column = 0;
    while (std::getline(ss, cell, ',')) {
      ++column;
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError(path, line_no, column, "expected a number");
      }
    }
    rows.push_back(std::move(row));
  }
  const int size = static_cast<int>(rows.size());
  if (size == 0) throw ParseError(path, 0, 0, "empty pattern file");
  if (c > 0 && size != c) {
    throw Error(ErrorCode::kShape, "pattern file has " + std::to_string(size) +
                                       " rows but c = " + std::to_string(c));
  }
  Matrix m(size, size);
  for (int i = 0; i < size; ++i) {
    if (static_cast<int>(rows[i].size()) != size) {
      throw Error(ErrorCode::kShape, "pattern file is not square");
    }
    for (int j = 0; j < size; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

Matrix PatternFamilyA(double a, int c) {
  if (c < 2) throw Error(ErrorCode::kInvalidArgument, "c must be at least 2");
  const double other = Clamp0(1.0 / 3.0 - a);
  if (a < 0.0 || other < 0.0) {
    throw Error(ErrorCode::kOutOfRange,
                "pattern parameter a must lie in [0, 1/3]");
  }
  Matrix m = Matrix::Constant(c, c, other);
  for (int i = 0; i < c; ++i) {
    m(i, i) = a;
    m(i, (i + 1) % c) = 2.0 * a;
  }
  return m;
}

Matrix PatternHomophilous(double a1, int c) {
  if (c < 2) throw Error(ErrorCode::kInvalidArgument, "c must be at least 2");
  if (a1 < 0.0 || a1 > 1.0) {
    throw Error(ErrorCode::kOutOfRange, "homophilous a1 must lie in [0, 1]");
  }
  Matrix m = Matrix::Constant(c, c, (1.0 - a1) / (c - 1));
  m.diagonal().setConstant(a1);
  return m;
}

Matrix PatternGroup(double a2) {
  if (a2 < 0.0 || a2 > 0.2 + kBoundaryTol) {
    throw Error(ErrorCode::kOutOfRange, "group a2 must lie in [0, 0.2]");
  }
  const double b = a2 + 0.2;
  const double cross = Clamp0((0.8 - 2.0 * a2) / 3.0);
  const double back = Clamp0((0.6 - 3.0 * a2) / 2.0);
  Matrix m(5, 5);
  // Group {0, 1}.
  m.row(0) << a2, b, cross, cross, cross;
  m.row(1) << b, a2, cross, cross, cross;
  // Group {2, 3, 4}.
  m.row(2) << back, back, a2, b, b;
  m.row(3) << back, back, b, a2, b;
  m.row(4) << back, back, b, b, a2;
  return m;
}

Matrix ParsePattern(const std::string& spec, int c) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "pattern must look like a=<v>, homophilous=<v>, group=<v> or "
                "file=<path>");
  }
  const std::string family = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  if (family == "file") return LoadPatternFile(value, c);
  const double v = ParseNumber(value, "--pattern");
  if (family == "a") return PatternFamilyA(v, c);
  if (family == "homophilous") return PatternHomophilous(v, c);
  if (family == "group") {
    if (c != 5) {
      throw Error(ErrorCode::kInvalidArgument, "the group family needs c = 5");
    }
    return PatternGroup(v);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown pattern family '" +
                                               family + "'");
}

}  // namespace hsbm
