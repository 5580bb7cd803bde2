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

// Heterophilous stochastic block model: parameters, pattern families and the
// sampler for labels, directed incoming edges and Gaussian node features.

#ifndef HSBM_MODEL_H_
#define HSBM_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsbm/common.h"

namespace hsbm {

struct HsbmParams {
  int64_t n = 1000;
  int c = 5;
  int d = 5;
  // Class priors. Must sum to one.
  std::vector<double> eta;
  // Norm of each class mean. Means are mean_scale * e_k, so pairwise mean
  // distance is mean_scale * sqrt(2).
  double mean_scale = 1.0;
  double sigma = 0.6;
  // c x c row-stochastic neighborhood-distribution matrix.
  Matrix mhat;
  // Per-class mean in-degree.
  std::vector<double> dbar;
  // Standard deviation of the per-node topological noise.
  double delta = 0.0;
  // Aggregation-time option; generation never emits self-edges.
  bool self_loops = false;

  // n=1000, c=d=5, sigma=0.6, uniform priors, mean degree 25.
  static HsbmParams Defaults(const Matrix& mhat, double degree = 25.0);

  // Throws Error on any violated invariant.
  void Validate() const;

  double gamma() const;
  double mean_degree() const;
};

// Edge-probability matrix m_kt = (dbar_k / n) * mhat_kt / eta_t.
// Throws kInfeasibleModel if any entry exceeds one.
Matrix DeriveEdgeProbabilities(const HsbmParams& params);

// Directed graph stored as incoming-neighbor lists: row i holds every j with
// a_ij = 1, i.e. every edge j -> i. Rows are sorted.
struct GraphSample {
  int num_classes = 0;
  std::vector<int32_t> labels;
  std::vector<int64_t> offsets;     // size n + 1
  std::vector<int32_t> neighbors;   // size num_edges
  Matrix features;                  // n x d, or empty
  Matrix node_dists;                // n x c target distributions, or empty
  int64_t capped_probabilities = 0;  // noisy-edge probabilities clipped to 1

  int64_t num_nodes() const { return static_cast<int64_t>(labels.size()); }
  int64_t num_edges() const { return static_cast<int64_t>(neighbors.size()); }
  int32_t degree(int64_t i) const {
    return static_cast<int32_t>(offsets[i + 1] - offsets[i]);
  }
  std::span<const int32_t> in_neighbors(int64_t i) const {
    return {neighbors.data() + offsets[i],
            static_cast<size_t>(offsets[i + 1] - offsets[i])};
  }
  std::vector<int32_t> degrees() const;
  int64_t zero_degree_count() const;
  std::vector<int64_t> class_counts() const;

  // Builds the adjacency from (src, dst) pairs; edge src -> dst sets
  // a[dst][src]. Duplicate pairs collapse into one edge.
  static GraphSample FromEdges(int num_classes, std::vector<int32_t> labels,
                               std::vector<std::pair<int32_t, int32_t>> edges);
};

std::vector<int32_t> SampleLabels(const HsbmParams& params, uint64_t seed);

// Fills labels, adjacency and node_dists (features stay empty).
GraphSample SampleGraph(const HsbmParams& params,
                        const std::vector<int32_t>& labels, uint64_t seed);

// Row i is mean_scale * e_{label_i} + sigma * g_i. Throws kDimension if d < c.
Matrix SampleFeatures(const HsbmParams& params,
                      const std::vector<int32_t>& labels, uint64_t seed);

// Labels, edges and features from independent substreams of `seed`.
GraphSample Generate(const HsbmParams& params, uint64_t seed);

// Legal neighborhood distribution from a perturbed one: negative entries are
// clipped to zero and the row is renormalized. An all-zero row falls back to
// `fallback`.
std::vector<double> ProjectToSimplex(std::span<const double> perturbed,
                                     std::span<const double> fallback);

// mhat_ii = a, mhat_i,(i+1) mod c = 2a, 1/3 - a elsewhere.
Matrix PatternFamilyA(double a, int c = 5);
// Diagonal a1, off-diagonal (1 - a1) / (c - 1).
Matrix PatternHomophilous(double a1, int c = 5);
// Two class groups {0, 1} and {2, 3, 4}; a2 in [0, 0.2].
Matrix PatternGroup(double a2);

// Parses "a=<v>", "homophilous=<v>", "group=<v>" or "file=<path>" (CSV with
// one row of the matrix per line).
Matrix ParsePattern(const std::string& spec, int c);

bool IsRowStochastic(const Matrix& m, double tol);

}  // namespace hsbm

#endif  // HSBM_MODEL_H_
