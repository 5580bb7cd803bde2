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

#include "hsbm/hsbm_c.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "json.hpp"

#include "hsbm/analyze.h"
#include "hsbm/bundle.h"
#include "hsbm/classify.h"
#include "hsbm/sweep.h"
#include "hsbm/theory.h"

using nlohmann::json;

struct hsbm_params {
  hsbm::HsbmParams value;
};

struct hsbm_graph {
  hsbm::GraphSample graph;
  json provenance;
};

namespace {

thread_local std::string g_last_error;

hsbm_status ToStatus(hsbm::ErrorCode code) {
  using hsbm::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return HSBM_INVALID_ARGUMENT;
    case ErrorCode::kInfeasibleModel: return HSBM_INFEASIBLE_MODEL;
    case ErrorCode::kDimension: return HSBM_DIMENSION_ERROR;
    case ErrorCode::kOutOfRange: return HSBM_OUT_OF_RANGE;
    case ErrorCode::kAssumptionViolation: return HSBM_ASSUMPTION_VIOLATION;
    case ErrorCode::kDegeneratePattern: return HSBM_DEGENERATE_PATTERN;
    case ErrorCode::kParse: return HSBM_PARSE_ERROR;
    case ErrorCode::kShape: return HSBM_SHAPE_ERROR;
    case ErrorCode::kIo: return HSBM_IO_ERROR;
    case ErrorCode::kEmptyClass: return HSBM_EMPTY_CLASS;
    case ErrorCode::kConfig: return HSBM_CONFIG_ERROR;
  }
  return HSBM_INTERNAL_ERROR;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
hsbm_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return HSBM_OK;
  } catch (const hsbm::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("JSON error: ") + e.what();
    return HSBM_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HSBM_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HSBM_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return HSBM_INTERNAL_ERROR;
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(bool ok, const char* what) {
  if (!ok) throw hsbm::Error(hsbm::ErrorCode::kInvalidArgument, what);
}

json ParseJson(const char* text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw hsbm::ParseError("<json>", 1, static_cast<int64_t>(e.byte), e.what());
  }
}

}  // namespace

extern "C" {

const char* hsbm_status_string(hsbm_status status) {
  switch (status) {
    case HSBM_OK: return "OK";
    case HSBM_INVALID_ARGUMENT: return "InvalidArgument";
    case HSBM_INFEASIBLE_MODEL: return "InfeasibleModel";
    case HSBM_DIMENSION_ERROR: return "DimensionError";
    case HSBM_OUT_OF_RANGE: return "OutOfRange";
    case HSBM_ASSUMPTION_VIOLATION: return "AssumptionViolation";
    case HSBM_DEGENERATE_PATTERN: return "DegeneratePattern";
    case HSBM_PARSE_ERROR: return "ParseError";
    case HSBM_SHAPE_ERROR: return "ShapeError";
    case HSBM_IO_ERROR: return "IoError";
    case HSBM_EMPTY_CLASS: return "EmptyClass";
    case HSBM_CONFIG_ERROR: return "ConfigError";
    case HSBM_INTERNAL_ERROR: return "InternalError";
  }
  return "Unknown";
}

const char* hsbm_last_error_message(void) { return g_last_error.c_str(); }

void hsbm_free_string(char* s) { std::free(s); }

const char* hsbm_version(void) { return "1.0.0"; }

hsbm_status hsbm_params_create(const char* text, hsbm_params** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto params = std::make_unique<hsbm_params>();
    params->value = hsbm::ParamsFromJson(ParseJson(text));
    params->value.Validate();
    *out = params.release();
  });
}

hsbm_status hsbm_params_to_json(const hsbm_params* params, char** out_json) {
  return Guard([&] {
    Require(params != nullptr && out_json != nullptr, "null argument");
    *out_json = CopyString(hsbm::ParamsToJson(params->value).dump());
  });
}

void hsbm_params_destroy(hsbm_params* params) { delete params; }

hsbm_status hsbm_graph_generate(const hsbm_params* params, uint64_t seed,
                                hsbm_graph** out) {
  return Guard([&] {
    Require(params != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto g = std::make_unique<hsbm_graph>();
    g->graph = hsbm::Generate(params->value, seed);
    g->provenance = {{"params", hsbm::ParamsToJson(params->value)},
                     {"seed", seed}};
    *out = g.release();
  });
}

hsbm_status hsbm_graph_load(const char* path, hsbm_graph** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    hsbm::Bundle b = hsbm::LoadBundle(path);
    auto g = std::make_unique<hsbm_graph>();
    g->graph = std::move(b.graph);
    g->provenance = b.header.value("provenance", json::object());
    *out = g.release();
  });
}

hsbm_status hsbm_graph_save(const hsbm_graph* graph, const char* dir) {
  return Guard([&] {
    Require(graph != nullptr && dir != nullptr, "null argument");
    hsbm::SaveBundle(graph->graph, graph->provenance, dir);
  });
}

hsbm_status hsbm_graph_num_nodes(const hsbm_graph* graph, int64_t* out) {
  return Guard([&] {
    Require(graph != nullptr && out != nullptr, "null argument");
    *out = graph->graph.num_nodes();
  });
}

hsbm_status hsbm_graph_num_edges(const hsbm_graph* graph, int64_t* out) {
  return Guard([&] {
    Require(graph != nullptr && out != nullptr, "null argument");
    *out = graph->graph.num_edges();
  });
}

hsbm_status hsbm_graph_summary(const hsbm_graph* graph, char** out_json) {
  return Guard([&] {
    Require(graph != nullptr && out_json != nullptr, "null argument");
    const hsbm::GraphSample& g = graph->graph;
    const int64_t d = g.features.rows() == g.num_nodes() ? g.features.cols() : 0;
    json j = {{"n", g.num_nodes()},
              {"c", g.num_classes},
              {"d", d},
              {"num_edges", g.num_edges()},
              {"zero_degree_count", g.zero_degree_count()},
              {"capped_probabilities", g.capped_probabilities},
              {"class_counts", g.class_counts()}};
    *out_json = CopyString(j.dump());
  });
}

void hsbm_graph_destroy(hsbm_graph* graph) { delete graph; }

hsbm_status hsbm_gains(const hsbm_params* params, const char* kind, int layers,
                       double varsigma, char** out_json) {
  return Guard([&] {
    Require(params != nullptr && kind != nullptr && out_json != nullptr,
            "null argument");
    const auto inp = hsbm::SeparabilityInputs::FromParams(params->value);
    const std::string k = kind;
    hsbm::GainReport r;
    if (k == "single_gc") {
      r = hsbm::GainSingleGc(inp, varsigma);
    } else if (k == "noisy_gc") {
      if (params->value.d < params->value.c) {
        throw hsbm::Error(hsbm::ErrorCode::kDimension,
                          "noisy gains need d >= c");
      }
      r = hsbm::GainNoisyGc(inp, varsigma);
    } else if (k == "multi_gc") {
      r = hsbm::GainMultiGcApprox(inp, layers, varsigma);
    } else {
      throw hsbm::Error(hsbm::ErrorCode::kInvalidArgument,
                        "unknown gain kind '" + k + "'");
    }
    *out_json = CopyString(hsbm::GainReportToJson(r).dump());
  });
}

hsbm_status hsbm_gains_exact(const hsbm_graph* graph, int layers,
                             double varsigma, char** out_json) {
  return Guard([&] {
    Require(graph != nullptr && out_json != nullptr, "null argument");
    Require(layers >= 0, "layers must be >= 0");
    const auto r = hsbm::GainMultiGcExact(graph->graph, layers, varsigma);
    *out_json = CopyString(hsbm::GainReportToJson(r).dump());
  });
}

hsbm_status hsbm_audit(const hsbm_graph* graph, double varsigma,
                       char** out_json) {
  return Guard([&] {
    Require(graph != nullptr && out_json != nullptr, "null argument");
    const auto r = hsbm::Audit(graph->graph, varsigma);
    *out_json = CopyString(hsbm::AuditToJson(r).dump());
  });
}

hsbm_status hsbm_train(const hsbm_graph* graph, const char* config_json,
                       uint64_t seed, char** out_json) {
  return Guard([&] {
    Require(graph != nullptr && out_json != nullptr, "null argument");
    const hsbm::GraphSample& g = graph->graph;
    if (g.features.rows() != g.num_nodes() || g.features.cols() == 0) {
      throw hsbm::Error(hsbm::ErrorCode::kShape,
                        "training needs a graph with node features");
    }
    const json cfg_json =
        config_json != nullptr ? ParseJson(config_json) : json::object();
    const hsbm::TrainConfig cfg = hsbm::TrainConfigFromJson(cfg_json);
    hsbm::AggregationConfig agg;
    agg.layers = cfg_json.value("layers", 1);
    agg.self_loops = cfg_json.value("self_loops", false);
    agg.precision =
        hsbm::ParsePrecision(cfg_json.value("precision", std::string("double")));
    const std::string mode = cfg_json.value("gcn_mode", std::string("pre"));
    if (mode != "pre" && mode != "second_layer") {
      throw hsbm::Error(hsbm::ErrorCode::kConfig,
                        "gcn_mode must be 'pre' or 'second_layer'");
    }
    const hsbm::Split split = hsbm::MakeSplit(g.num_nodes(), seed);
    const auto mlp =
        hsbm::TrainMlp(g.features, g.labels, g.num_classes, split, cfg, seed);
    const auto gcn = hsbm::TrainGcn(
        g, g.features, split, cfg, agg, seed,
        mode == "pre" ? hsbm::GcnMode::kPreAggregate
                      : hsbm::GcnMode::kSecondLayer);
    json out = {{"mlp", hsbm::TrainResultToJson(mlp)},
                {"gcn", hsbm::TrainResultToJson(gcn)}};
    *out_json = CopyString(out.dump());
  });
}

hsbm_status hsbm_sweep_run(const char* spec_json, const char* csv_path,
                           char** out_csv) {
  return Guard([&] {
    Require(spec_json != nullptr, "null argument");
    if (out_csv != nullptr) *out_csv = nullptr;
    const auto spec = hsbm::SweepSpecFromJson(ParseJson(spec_json));
    const std::string csv = hsbm::SweepToCsv(hsbm::RunSweep(spec));
    if (csv_path != nullptr) {
      std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
      if (!f) {
        throw hsbm::Error(hsbm::ErrorCode::kIo,
                          std::string("cannot write ") + csv_path);
      }
      f << csv;
      if (!f) {
        throw hsbm::Error(hsbm::ErrorCode::kIo,
                          std::string("write failed for ") + csv_path);
      }
    }
    if (out_csv != nullptr) *out_csv = CopyString(csv);
  });
}

}  // extern "C"
