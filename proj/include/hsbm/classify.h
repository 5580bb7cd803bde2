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

// Classifiers for node features: the closed-form Bayes rules on raw and
// aggregated features, their exact linear-layer equivalents, and a small
// trainable MLP / GCN with grid search.

#ifndef HSBM_CLASSIFY_H_
#define HSBM_CLASSIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsbm/aggregate.h"
#include "hsbm/common.h"
#include "hsbm/model.h"
#include "hsbm/theory.h"

namespace hsbm {

// Index of the largest score; ties go to the lowest index.
int ArgmaxLowest(const double* scores, int c);

enum class BayesKind { kRaw, kAggregated };

struct BayesModel {
  BayesKind kind = BayesKind::kRaw;
  Matrix means;            // c x d
  Vector log_prior_terms;  // raw: sigma^2 ln eta_k; aggregated: ln eta_k
  Vector variance_terms;   // aggregated: sigma_k^2 = sigma^2 / D_k
};

// argmax_k <x, mu_k> + sigma^2 ln eta_k.
BayesModel BayesRaw(const HsbmParams& params);
// argmax_k ln eta_k - d ln s_k - ||x - mu~_k||^2 / (2 s_k^2) with
// mu~_k = sum_t mhat_kt mu_t and s_k = sigma / sqrt(D_k).
BayesModel BayesAggregated(const HsbmParams& params);

int Decide(const BayesModel& model, const double* x);
std::vector<int32_t> Predict(const BayesModel& model, const Matrix& x);

struct LinearNet {
  Matrix weight;  // d x c
  Vector bias;    // c

  int Decide(const double* x) const;
  std::vector<int32_t> Predict(const Matrix& x) const;
};

// Throws kAssumptionViolation for an aggregated model whose class variances
// differ (the quadratic terms no longer cancel).
LinearNet BayesToLinear(const BayesModel& model);

struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<int64_t> counts;  // row-major, rows = true class

  int64_t at(int t, int k) const { return counts[t * num_classes + k]; }
  int64_t total() const;
  double accuracy() const;
};

ConfusionMatrix Confusion(const std::vector<int32_t>& predictions,
                          const std::vector<int32_t>& labels,
                          const std::vector<int64_t>& node_set,
                          int num_classes);

struct PearsonResult {
  double value = 0.0;
  bool degenerate = false;  // one series is constant
  std::vector<double> x;    // gains for pairs t < k
  std::vector<double> y;    // confusion-difference sums for the same pairs
};

double PearsonCorrelation(const std::vector<double>& x,
                          const std::vector<double>& y, bool* degenerate);

PearsonResult PearsonGainVsConfusion(const GainReport& gains,
                                     const ConfusionMatrix& cm_gcn,
                                     const ConfusionMatrix& cm_mlp);

struct Split {
  std::vector<int64_t> train;
  std::vector<int64_t> val;
  std::vector<int64_t> test;
};

// Random 60/20/20 partition (by default) from the split stream of `seed`.
Split MakeSplit(int64_t n, uint64_t seed, double train_frac = 0.6,
                double val_frac = 0.2);

enum class Optimizer { kAdam, kGd };
const char* OptimizerName(Optimizer opt);
Optimizer ParseOptimizer(const std::string& name);

struct HyperParams {
  int hidden = 0;  // 0 = one linear layer
  double lr = 0.05;
  double weight_decay = 0.0;
  double dropout = 0.0;
  int epochs = 400;
};

struct TrainConfig {
  std::vector<int> hidden = {0};
  std::vector<double> lr = {0.05};
  std::vector<double> weight_decay = {0.0};
  std::vector<double> dropout = {0.0};
  std::vector<int> epochs = {400};
  Optimizer optimizer = Optimizer::kAdam;
  int eval_every = 10;
  // Confusion over the test split, or over every node when false.
  bool confusion_on_test = true;

  // Grid from the benchmark protocol for real graphs.
  static TrainConfig RealWorldGrid();
  void Validate() const;
};

nlohmann::json TrainConfigToJson(const TrainConfig& cfg);
// Missing keys keep their defaults; scalars are accepted for grid lists.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct TrainResult {
  double accuracy = 0.0;      // test accuracy in percent
  double val_accuracy = 0.0;  // percent
  ConfusionMatrix confusion;
  HyperParams selected;
  uint64_t seed = 0;
  std::vector<int32_t> predictions;  // every node, from the selected model
};

nlohmann::json TrainResultToJson(const TrainResult& r);

// Feature-only classifier.
TrainResult TrainMlp(const Matrix& features, const std::vector<int32_t>& labels,
                     int num_classes, const Split& split,
                     const TrainConfig& cfg, uint64_t seed);

enum class GcnMode {
  kPreAggregate,  // features aggregated agg.layers times, then an MLP
  kSecondLayer,   // hidden -> aggregation -> output (needs hidden > 0)
};

TrainResult TrainGcn(const GraphSample& graph, const Matrix& features,
                     const Split& split, const TrainConfig& cfg,
                     const AggregationConfig& agg, uint64_t seed,
                     GcnMode mode = GcnMode::kPreAggregate);

}  // namespace hsbm

#endif  // HSBM_CLASSIFY_H_
