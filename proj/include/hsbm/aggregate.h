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

// Row-normalized aggregation X <- D^-1 A X, repeated l times, in one of three
// arithmetic tiers. Each tier keeps every intermediate in its own type, which
// is what makes the single/double/extended collapse study meaningful.

#ifndef HSBM_AGGREGATE_H_
#define HSBM_AGGREGATE_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hsbm/common.h"
#include "hsbm/double_double.h"
#include "hsbm/model.h"

namespace hsbm {

enum class Precision { kSingle, kDouble, kExtended };

const char* PrecisionName(Precision p);
// "single" | "double" | "extended"; throws kInvalidArgument otherwise.
Precision ParsePrecision(const std::string& name);

struct AggregationConfig {
  int layers = 1;
  bool self_loops = false;
  Precision precision = Precision::kDouble;
};

// One averaging step over `cols` interleaved columns. Row i of `out` is the
// mean of the rows of `in` over the in-neighbors of i (plus i itself with
// self-loops). A row with nothing to average is copied unchanged.
template <typename T>
void AggregateRows(const GraphSample& graph, bool self_loops, const T* in,
                   T* out, int64_t cols) {
  const int64_t n = graph.num_nodes();
  for (int64_t i = 0; i < n; ++i) {
    T* dst = out + i * cols;
    const auto nbrs = graph.in_neighbors(i);
    if (nbrs.empty()) {
      for (int64_t j = 0; j < cols; ++j) dst[j] = in[i * cols + j];
      continue;
    }
    for (int64_t j = 0; j < cols; ++j) dst[j] = T(0);
    if (self_loops) {
      for (int64_t j = 0; j < cols; ++j) dst[j] += in[i * cols + j];
    }
    for (int32_t src : nbrs) {
      const T* row = in + static_cast<int64_t>(src) * cols;
      for (int64_t j = 0; j < cols; ++j) dst[j] += row[j];
    }
    const int64_t count =
        static_cast<int64_t>(nbrs.size()) + (self_loops ? 1 : 0);
    const T inv = T(1) / T(static_cast<double>(count));
    for (int64_t j = 0; j < cols; ++j) dst[j] *= inv;
  }
}

struct SpreadStats {
  double avg_std = 0.0;            // mean over columns of the std over nodes
  double avg_mean_distance = 0.0;  // mean over class pairs of ||mu_t - mu_k||
};

// Statistics of the given matrix in double arithmetic.
SpreadStats FeatureSpreadStats(const Matrix& features,
                               const std::vector<int32_t>& labels,
                               int num_classes);

// Row i of the result is the row mean over its in-neighbors.
Matrix AggregateOnce(const GraphSample& graph, const Matrix& features,
                     const AggregationConfig& config);
// config.layers applications in config.precision, returned as double.
Matrix AggregateL(const GraphSample& graph, const Matrix& features,
                  const AggregationConfig& config);

// Keeps aggregated features at tier precision between layers so a layer
// sweep costs one step per layer instead of l.
class LayerPropagator {
 public:
  LayerPropagator(const GraphSample& graph, const Matrix& features,
                  bool self_loops, Precision precision);

  void Step();
  int layer() const { return layer_; }
  Precision precision() const { return precision_; }

  // Current values rounded to double.
  Matrix Values() const;
  // Per-column (x - mean) / std computed in tier arithmetic, then rounded to
  // double. A constant column maps to zeros.
  Matrix Standardized() const;
  // Spread statistics evaluated in tier arithmetic.
  SpreadStats Spread() const;

 private:
  template <typename T>
  struct State {
    std::vector<T> cur;
    std::vector<T> next;
  };

  const GraphSample* graph_;
  int64_t rows_;
  int64_t cols_;
  bool self_loops_;
  Precision precision_;
  int layer_ = 0;
  std::variant<State<float>, State<double>, State<DoubleDouble>> state_;
};

}  // namespace hsbm

#endif  // HSBM_AGGREGATE_H_
