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

#include "hsbm/aggregate.h"

#include <cmath>

namespace hsbm {
namespace {

double ToDouble(float v) { return v; }
double ToDouble(double v) { return v; }
double ToDouble(DoubleDouble v) { return static_cast<double>(v); }

float Sqrt(float v) { return std::sqrt(v); }
double Sqrt(double v) { return std::sqrt(v); }
DoubleDouble Sqrt(DoubleDouble v) { return sqrt(v); }

template <typename T>
std::vector<T> FromMatrix(const Matrix& m) {
  std::vector<T> out(static_cast<size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out[i] = static_cast<T>(m.data()[i]);
  }
  return out;
}

template <typename T>
Matrix ToMatrix(const std::vector<T>& v, int64_t rows, int64_t cols) {
  Matrix m(rows, cols);
  for (int64_t i = 0; i < rows * cols; ++i) m.data()[i] = ToDouble(v[i]);
  return m;
}

template <typename T>
std::vector<T> ColumnMeans(const std::vector<T>& x, int64_t rows,
                           int64_t cols) {
  std::vector<T> mean(cols, T(0));
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) mean[j] += x[i * cols + j];
  }
  const T inv = T(1) / T(static_cast<double>(rows));
  for (auto& m : mean) m *= inv;
  return mean;
}

// Population standard deviation per column.
template <typename T>
std::vector<T> ColumnStds(const std::vector<T>& x, const std::vector<T>& mean,
                          int64_t rows, int64_t cols) {
  std::vector<T> var(cols, T(0));
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) {
      const T dev = x[i * cols + j] - mean[j];
      var[j] += dev * dev;
    }
  }
  const T inv = T(1) / T(static_cast<double>(rows));
  for (auto& v : var) v = Sqrt(v * inv);
  return var;
}

template <typename T>
SpreadStats SpreadOf(const std::vector<T>& x, int64_t rows, int64_t cols,
                     const std::vector<int32_t>& labels, int num_classes) {
  SpreadStats s;
  if (rows == 0 || cols == 0) return s;
  const auto mean = ColumnMeans(x, rows, cols);
  const auto std = ColumnStds(x, mean, rows, cols);
  T total(0);
  for (const auto& v : std) total += v;
  s.avg_std = ToDouble(total) / static_cast<double>(cols);

  std::vector<T> class_sum(static_cast<size_t>(num_classes) * cols, T(0));
  std::vector<int64_t> count(num_classes, 0);
  for (int64_t i = 0; i < rows; ++i) {
    const int32_t y = labels[i];
    ++count[y];
    for (int64_t j = 0; j < cols; ++j) class_sum[y * cols + j] += x[i * cols + j];
  }
  for (int k = 0; k < num_classes; ++k) {
    if (count[k] == 0) continue;
    const T inv = T(1) / T(static_cast<double>(count[k]));
    for (int64_t j = 0; j < cols; ++j) class_sum[k * cols + j] *= inv;
  }
  double dist_sum = 0.0;
  int64_t pairs = 0;
  for (int t = 0; t < num_classes; ++t) {
    if (count[t] == 0) continue;
    for (int k = t + 1; k < num_classes; ++k) {
      if (count[k] == 0) continue;
      T sq(0);
      for (int64_t j = 0; j < cols; ++j) {
        const T diff = class_sum[t * cols + j] - class_sum[k * cols + j];
        sq += diff * diff;
      }
      dist_sum += ToDouble(Sqrt(sq));
      ++pairs;
    }
  }
  s.avg_mean_distance = pairs > 0 ? dist_sum / static_cast<double>(pairs) : 0.0;
  return s;
}

template <typename T>
Matrix RunLayers(const GraphSample& graph, const Matrix& features,
                 const AggregationConfig& config) {
  std::vector<T> cur = FromMatrix<T>(features);
  std::vector<T> next(cur.size());
  for (int l = 0; l < config.layers; ++l) {
    AggregateRows<T>(graph, config.self_loops, cur.data(), next.data(),
                     features.cols());
    cur.swap(next);
  }
  return ToMatrix(cur, features.rows(), features.cols());
}

void CheckShape(const GraphSample& graph, const Matrix& features) {
  if (features.rows() != graph.num_nodes()) {
    throw Error(ErrorCode::kShape,
                "feature rows (" + std::to_string(features.rows()) +
                    ") do not match node count (" +
                    std::to_string(graph.num_nodes()) + ")");
  }
}

}  // namespace

const char* PrecisionName(Precision p) {
  switch (p) {
    case Precision::kSingle: return "single";
    case Precision::kDouble: return "double";
    case Precision::kExtended: return "extended";
  }
  return "double";
}

Precision ParsePrecision(const std::string& name) {
  if (name == "single" || name == "float32") return Precision::kSingle;
  if (name == "double" || name == "float64") return Precision::kDouble;
  if (name == "extended") return Precision::kExtended;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown precision '" + name + "' (single|double|extended)");
}

SpreadStats FeatureSpreadStats(const Matrix& features,
                               const std::vector<int32_t>& labels,
                               int num_classes) {
  std::vector<double> x(features.data(), features.data() + features.size());
  return SpreadOf(x, features.rows(), features.cols(), labels, num_classes);
}

Matrix AggregateOnce(const GraphSample& graph, const Matrix& features,
                     const AggregationConfig& config) {
  AggregationConfig one = config;
  one.layers = 1;
  return AggregateL(graph, features, one);
}

Matrix AggregateL(const GraphSample& graph, const Matrix& features,
                  const AggregationConfig& config) {
  CheckShape(graph, features);
  if (config.layers < 0) {
    throw Error(ErrorCode::kInvalidArgument, "layers must be >= 0");
  }
  switch (config.precision) {
    case Precision::kSingle: return RunLayers<float>(graph, features, config);
    case Precision::kDouble: return RunLayers<double>(graph, features, config);
    case Precision::kExtended:
      return RunLayers<DoubleDouble>(graph, features, config);
  }
  return features;
}

LayerPropagator::LayerPropagator(const GraphSample& graph,
                                 const Matrix& features, bool self_loops,
                                 Precision precision)
    : graph_(&graph),
      rows_(features.rows()),
      cols_(features.cols()),
      self_loops_(self_loops),
      precision_(precision) {
  CheckShape(graph, features);
  auto init = [&](auto tag) {
    using T = decltype(tag);
    State<T> s;
    s.cur = FromMatrix<T>(features);
    s.next.resize(s.cur.size());
    state_ = std::move(s);
  };
  switch (precision) {
    case Precision::kSingle: init(float{}); break;
    case Precision::kDouble: init(double{}); break;
    case Precision::kExtended: init(DoubleDouble{}); break;
  }
}

void LayerPropagator::Step() {
  std::visit(
      [&](auto& s) {
        AggregateRows(*graph_, self_loops_, s.cur.data(), s.next.data(), cols_);
        s.cur.swap(s.next);
      },
      state_);
  ++layer_;
}

Matrix LayerPropagator::Values() const {
  return std::visit([&](const auto& s) { return ToMatrix(s.cur, rows_, cols_); },
                    state_);
}

Matrix LayerPropagator::Standardized() const {
  return std::visit(
      [&](const auto& s) {
        using T = typename std::decay_t<decltype(s.cur)>::value_type;
        const auto mean = ColumnMeans(s.cur, rows_, cols_);
        const auto std = ColumnStds(s.cur, mean, rows_, cols_);
        Matrix out(rows_, cols_);
        for (int64_t j = 0; j < cols_; ++j) {
          const bool flat = !(std[j] > T(0));
          const T inv = flat ? T(0) : T(1) / std[j];
          for (int64_t i = 0; i < rows_; ++i) {
            out(i, j) = flat ? 0.0 : ToDouble((s.cur[i * cols_ + j] - mean[j]) * inv);
          }
        }
        return out;
      },
      state_);
}

SpreadStats LayerPropagator::Spread() const {
  return std::visit(
      [&](const auto& s) {
        return SpreadOf(s.cur, rows_, cols_, graph_->labels,
                        graph_->num_classes);
      },
      state_);
}

}  // namespace hsbm
