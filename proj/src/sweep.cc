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

#include "hsbm/sweep.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "hsbm/analyze.h"
#include "hsbm/bundle.h"

namespace hsbm {
using nlohmann::json;
namespace {

std::vector<double> Range(double lo, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    // Round to 12 digits so 0.1 * 3 prints as 0.3.
    out.push_back(std::round((lo + step * i) * 1e12) / 1e12);
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatFixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string JoinList(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out.push_back(';');
    out += FormatDouble(v[i]);
  }
  return out;
}

std::string PointLabel(SweepKind kind, double value) {
  return std::string(SweepKindName(kind)) + " grid point " + FormatDouble(value);
}

// Model for one grid point.
HsbmParams ParamsAt(const SweepSpec& spec, double value) {
  HsbmParams p = spec.base;
  switch (spec.kind) {
    case SweepKind::kPatternA: p.mhat = PatternFamilyA(value, p.c); break;
    case SweepKind::kHomophilous: p.mhat = PatternHomophilous(value, p.c); break;
    case SweepKind::kGroup: p.mhat = PatternGroup(value); break;
    case SweepKind::kDegree: p.dbar.assign(p.c, value); break;
    case SweepKind::kNoise: p.delta = value; break;
    case SweepKind::kLayers: break;
  }
  if (p.mhat.rows() != p.c) {
    throw Error(ErrorCode::kShape, "pattern size does not match c");
  }
  return p;
}

void FillPearson(SweepRow& row, const GainReport& gains, const TrainResult& gcn,
                 const TrainResult& mlp) {
  const PearsonResult pr =
      PearsonGainVsConfusion(gains, gcn.confusion, mlp.confusion);
  row.pearson_x = pr.x;
  row.pearson_y = pr.y;
}

std::vector<SweepRow> RunPoint(const SweepSpec& spec, double value,
                               uint64_t seed) {
  const HsbmParams p = ParamsAt(spec, value);
  const GraphSample g = Generate(p, seed);
  const Split split = MakeSplit(g.num_nodes(), seed);
  const TrainResult mlp =
      TrainMlp(g.features, g.labels, g.num_classes, split, spec.train, seed);

  GainReport gains;
  if (spec.kind == SweepKind::kNoise) {
    SeparabilityInputs inp = SeparabilityInputs::FromParams(p);
    inp.mhat = EmpiricalMhat(g).mhat;
    gains = GainNoisyGc(inp, spec.varsigma);
  } else {
    gains = GainSingleGc(p.mhat, p.dbar, spec.varsigma);
  }
  AggregationConfig agg;
  agg.layers = spec.gcn_layers;
  agg.self_loops = p.self_loops;
  const TrainResult gcn = TrainGcn(g, g.features, split, spec.train, agg, seed);

  SweepRow row;
  row.sweep_kind = SweepKindName(spec.kind);
  row.param = value;
  row.seed = seed;
  row.acc_mlp = mlp.accuracy;
  row.acc_gcn = gcn.accuracy;
  row.min_gain = gains.min_gain;
  row.max_gain = gains.max_gain;
  row.verdict = gains.verdict;
  FillPearson(row, gains, gcn, mlp);
  return {row};
}

// One graph and one exact-gain series per seed, one pass over the layers per
// tier.
std::vector<SweepRow> RunLayerSeed(const SweepSpec& spec, uint64_t seed) {
  const HsbmParams& p = spec.base;
  const GraphSample g = Generate(p, seed);
  const Split split = MakeSplit(g.num_nodes(), seed);
  const TrainResult mlp =
      TrainMlp(g.features, g.labels, g.num_classes, split, spec.train, seed);

  std::vector<int> layers;
  for (double v : spec.grid) layers.push_back(static_cast<int>(std::lround(v)));
  const int max_layer = *std::max_element(layers.begin(), layers.end());
  const std::vector<GainReport> gains = GainMultiGcExactSeries(
      g, EmpiricalMhat(g).mhat, max_layer, spec.varsigma, p.self_loops);

  std::vector<SweepRow> rows;
  for (Precision precision : spec.precisions) {
    LayerPropagator prop(g, g.features, p.self_loops, precision);
    for (int l = 0; l <= max_layer; ++l) {
      if (l > 0) prop.Step();
      if (std::find(layers.begin(), layers.end(), l) == layers.end()) continue;
      const TrainResult gcn = TrainMlp(prop.Standardized(), g.labels,
                                       g.num_classes, split, spec.train, seed);
      const SpreadStats spread = prop.Spread();
      SweepRow row;
      row.sweep_kind = std::string("layers_") + PrecisionName(precision);
      row.param = l;
      row.seed = seed;
      row.acc_mlp = mlp.accuracy;
      row.acc_gcn = gcn.accuracy;
      row.min_gain = gains[l].min_gain;
      row.max_gain = gains[l].max_gain;
      row.verdict = gains[l].verdict;
      FillPearson(row, gains[l], gcn, mlp);
      row.has_spread = true;
      row.avg_std = spread.avg_std;
      row.avg_mean_distance = spread.avg_mean_distance;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

struct Unit {
  double value = 0.0;
  uint64_t seed = 0;
};

}  // namespace

const char* SweepKindName(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPatternA: return "pattern_a";
    case SweepKind::kHomophilous: return "homophilous";
    case SweepKind::kGroup: return "group";
    case SweepKind::kDegree: return "degree";
    case SweepKind::kNoise: return "noise";
    case SweepKind::kLayers: return "layers";
  }
  return "unknown";
}

SweepKind ParseSweepKind(const std::string& name) {
  for (SweepKind k : {SweepKind::kPatternA, SweepKind::kHomophilous,
                      SweepKind::kGroup, SweepKind::kDegree, SweepKind::kNoise,
                      SweepKind::kLayers}) {
    if (name == SweepKindName(k)) return k;
  }
  throw Error(ErrorCode::kConfig, "unknown sweep kind '" + name + "'");
}

std::vector<double> DefaultGrid(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPatternA: return Range(0.0, 0.02, 17);
    case SweepKind::kHomophilous: return Range(0.0, 0.1, 11);
    case SweepKind::kGroup: return Range(0.0, 0.02, 11);
    case SweepKind::kDegree: return {5, 10, 25, 50, 100, 200, 350};
    case SweepKind::kNoise: return Range(0.0, 0.002, 6);
    case SweepKind::kLayers: return Range(1.0, 1.0, 80);
  }
  return {};
}

void SweepSpec::Validate() const {
  if (grid.empty()) throw Error(ErrorCode::kConfig, "sweep grid is empty");
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "sweep seed list is empty");
  if (workers < 1) throw Error(ErrorCode::kConfig, "workers must be >= 1");
  if (gcn_layers < 0) throw Error(ErrorCode::kConfig, "gcn_layers must be >= 0");
  if (kind == SweepKind::kLayers) {
    if (precisions.empty()) {
      throw Error(ErrorCode::kConfig, "layer sweep needs at least one precision");
    }
    for (double v : grid) {
      if (v < 0.0 || v != std::floor(v)) {
        throw Error(ErrorCode::kConfig, "layer grid must hold integers >= 0");
      }
    }
  }
  train.Validate();
}

SweepSpec SweepSpecFromJson(const json& j) {
  SweepSpec spec;
  try {
    spec.kind = ParseSweepKind(j.value("kind", std::string("pattern_a")));
    spec.base = ParamsFromJson(j.value("params", json::object()));
    spec.grid = j.contains("grid") ? j.at("grid").get<std::vector<double>>()
                                   : DefaultGrid(spec.kind);
    if (j.contains("seeds")) spec.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    if (j.contains("train")) spec.train = TrainConfigFromJson(j.at("train"));
    spec.varsigma = j.value("varsigma", spec.varsigma);
    spec.gcn_layers = j.value("gcn_layers", spec.gcn_layers);
    spec.workers = j.value("workers", spec.workers);
    if (j.contains("precisions")) {
      spec.precisions.clear();
      for (const auto& name : j.at("precisions")) {
        spec.precisions.push_back(ParsePrecision(name.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad sweep spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

json SweepSpecToJson(const SweepSpec& spec) {
  json precisions = json::array();
  for (Precision p : spec.precisions) precisions.push_back(PrecisionName(p));
  return json{{"kind", SweepKindName(spec.kind)},
              {"grid", spec.grid},
              {"seeds", spec.seeds},
              {"params", ParamsToJson(spec.base)},
              {"train", TrainConfigToJson(spec.train)},
              {"varsigma", spec.varsigma},
              {"gcn_layers", spec.gcn_layers},
              {"precisions", precisions},
              {"workers", spec.workers}};
}

std::vector<SweepRow> RunSweep(const SweepSpec& spec) {
  spec.Validate();
  // Fail fast: every grid point must describe a feasible model.
  std::vector<Unit> units;
  if (spec.kind == SweepKind::kLayers) {
    spec.base.Validate();
    DeriveEdgeProbabilities(spec.base);
    for (uint64_t seed : spec.seeds) units.push_back({0.0, seed});
  } else {
    for (double v : spec.grid) {
      try {
        const HsbmParams p = ParamsAt(spec, v);
        p.Validate();
        DeriveEdgeProbabilities(p);
      } catch (const Error& e) {
        throw Error(e.code(), PointLabel(spec.kind, v) + ": " + e.what());
      }
      for (uint64_t seed : spec.seeds) units.push_back({v, seed});
    }
  }

  std::vector<std::vector<SweepRow>> results(units.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  size_t error_index = units.size();
  std::exception_ptr error;

  auto worker = [&]() {
    while (!failed.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      const Unit& u = units[i];
      try {
        results[i] = spec.kind == SweepKind::kLayers
                         ? RunLayerSeed(spec, u.seed)
                         : RunPoint(spec, u.value, u.seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(spec.workers, static_cast<int>(units.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<SweepRow> rows;
  for (auto& r : results) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.sweep_kind != b.sweep_kind) {
                       return a.sweep_kind < b.sweep_kind;
                     }
                     if (a.param != b.param) return a.param < b.param;
                     return a.seed < b.seed;
                   });
  return rows;
}

std::string SweepToCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << "\n";
  for (const SweepRow& r : rows) {
    os << r.sweep_kind << "," << FormatDouble(r.param) << "," << r.seed << ","
       << FormatFixed2(r.acc_mlp) << "," << FormatFixed2(r.acc_gcn) << ","
       << FormatDouble(r.min_gain) << "," << FormatDouble(r.max_gain) << ","
       << VerdictName(r.verdict) << "," << JoinList(r.pearson_x) << ","
       << JoinList(r.pearson_y) << ",";
    if (r.has_spread) {
      os << FormatDouble(r.avg_std) << "," << FormatDouble(r.avg_mean_distance);
    } else {
      os << ",";
    }
    os << "\n";
  }
  return os.str();
}

int CollapseLayer(const std::vector<int>& layers,
                  const std::vector<double>& accuracy, double drop) {
  if (layers.size() != accuracy.size()) {
    throw Error(ErrorCode::kShape, "layer and accuracy lists differ in length");
  }
  double best = -1.0;
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i > 0 && accuracy[i] < best - drop) return layers[i];
    best = std::max(best, accuracy[i]);
  }
  return -1;
}

}  // namespace hsbm
