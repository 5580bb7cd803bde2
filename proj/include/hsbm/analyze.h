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

// Empirical statistics of a labelled directed graph and the gain audit built
// on them. Works on any bundle, synthetic or not.

#ifndef HSBM_ANALYZE_H_
#define HSBM_ANALYZE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsbm/common.h"
#include "hsbm/model.h"
#include "hsbm/theory.h"

namespace hsbm {

struct EmpiricalPattern {
  // Row k averages the normalized neighbor-class histograms of the nodes in
  // class k that have at least one in-neighbor. A class with no such node
  // gets an all-zero row.
  Matrix mhat;
  // Mean in-degree per class, zero-degree nodes included.
  std::vector<double> class_degrees;
  std::vector<int64_t> class_counts;
};

// Throws kEmptyClass if some class has no node.
EmpiricalPattern EmpiricalMhat(const GraphSample& graph);

// Node-averaged fraction of same-class in-neighbors; zero-degree nodes are
// left out of the average. Returns 0 when every node has degree zero.
double HomophilyRatio(const GraphSample& graph);

// Per class: mean over coordinates of the population std (across the class's
// nodes with nonzero degree) of the normalized neighbor-class histograms.
// Classes with fewer than two such nodes get 0.
std::vector<double> EstimateNoise(const GraphSample& graph);

struct GraphStats {
  int64_t n = 0;
  int c = 0;
  int64_t num_edges = 0;
  int64_t zero_degree_count = 0;
  double homophily_ratio = 0.0;
  double avg_degree = 0.0;
  std::vector<double> class_degrees;
  Matrix empirical_mhat;
  std::vector<double> noise_std;
  std::vector<int64_t> class_counts;
};

GraphStats ComputeGraphStats(const GraphSample& graph);

struct AuditResult {
  GraphStats stats;
  GainReport gains;
};

// Single-convolution gains from the empirical pattern and per-class degrees.
AuditResult Audit(const GraphSample& graph, double varsigma);

nlohmann::json GraphStatsToJson(const GraphStats& stats);
nlohmann::json AuditToJson(const AuditResult& result);
// "t,k,gain" rows for t < k, with a header line.
std::string PairGainsCsv(const GainReport& report);

}  // namespace hsbm

#endif  // HSBM_ANALYZE_H_
