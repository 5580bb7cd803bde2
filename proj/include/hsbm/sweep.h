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

// Synthetic experiment sweeps. Every (grid point, seed) pair samples a graph,
// computes the matching gains and trains an MLP and a GCN on it. Rows come
// back sorted, so the CSV is independent of the worker count.

#ifndef HSBM_SWEEP_H_
#define HSBM_SWEEP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsbm/aggregate.h"
#include "hsbm/classify.h"
#include "hsbm/model.h"
#include "hsbm/theory.h"

namespace hsbm {

enum class SweepKind { kPatternA, kHomophilous, kGroup, kDegree, kNoise, kLayers };

const char* SweepKindName(SweepKind kind);
SweepKind ParseSweepKind(const std::string& name);
// a in {0, 0.02, ..., 0.32}, degrees {5, 10, 25, 50, 100, 200, 350},
// delta in {0, 0.002, ..., 0.01}, layers 1..80, a1 in {0, 0.1, ..., 1},
// a2 in {0, 0.02, ..., 0.2}.
std::vector<double> DefaultGrid(SweepKind kind);

struct SweepSpec {
  SweepKind kind = SweepKind::kPatternA;
  std::vector<double> grid;
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4};
  // Pattern, degree and noise of the base model. Pattern sweeps replace
  // mhat, degree sweeps dbar, noise sweeps delta.
  HsbmParams base;
  TrainConfig train;
  double varsigma = kSyntheticVarsigma;
  // Convolutions in the GCN for every kind except layers.
  int gcn_layers = 1;
  // Layer sweeps run once per tier.
  std::vector<Precision> precisions = {Precision::kSingle, Precision::kDouble};
  int workers = 1;

  void Validate() const;
};

// Keys: kind, grid, seeds, params (as accepted by ParamsFromJson), train,
// varsigma, gcn_layers, precisions, workers. Missing grid means DefaultGrid.
SweepSpec SweepSpecFromJson(const nlohmann::json& j);
nlohmann::json SweepSpecToJson(const SweepSpec& spec);

struct SweepRow {
  std::string sweep_kind;  // layer sweeps append the tier, e.g. layers_single
  double param = 0.0;
  uint64_t seed = 0;
  double acc_mlp = 0.0;  // percent
  double acc_gcn = 0.0;  // percent
  double min_gain = 0.0;
  double max_gain = 0.0;
  Verdict verdict = Verdict::kMixed;
  std::vector<double> pearson_x;
  std::vector<double> pearson_y;
  bool has_spread = false;
  double avg_std = 0.0;
  double avg_mean_distance = 0.0;
};

// Throws kInfeasibleModel, naming the grid point, before any work starts.
std::vector<SweepRow> RunSweep(const SweepSpec& spec);

inline constexpr const char* kSweepCsvHeader =
    "sweep_kind,param,seed,acc_mlp,acc_gcn,min_gain,max_gain,verdict,"
    "pearson_x,pearson_y,avg_std,avg_mean_distance";

std::string SweepToCsv(const std::vector<SweepRow>& rows);

// First layer whose accuracy falls more than `drop` points below the best
// accuracy seen at earlier layers; -1 if it never does.
int CollapseLayer(const std::vector<int>& layers,
                  const std::vector<double>& accuracy, double drop = 20.0);

}  // namespace hsbm

#endif  // HSBM_SWEEP_H_
