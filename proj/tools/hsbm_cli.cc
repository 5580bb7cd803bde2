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

// Command-line front end. Talks to the library only through the C API.
//
//   hsbm generate --pattern a=0.25 --seed 7 --out graph/
//   hsbm gains --pattern a=0.25 --dbar 25 --varsigma 1.2
//   hsbm audit graph/ --varsigma 1.2
//   hsbm train graph/ --layers 1
//   hsbm sweep --kind pattern_a --seeds 0,1,2,3,4 --out sweep.csv
//
// Exit status: 0 success, 2 usage or configuration error, 3 infeasible model,
// 4 I/O, parse or shape error, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsbm/hsbm_c.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

int ExitCodeFor(hsbm_status s) {
  switch (s) {
    case HSBM_OK: return kExitOk;
    case HSBM_INFEASIBLE_MODEL: return kExitInfeasible;
    case HSBM_IO_ERROR:
    case HSBM_PARSE_ERROR:
    case HSBM_SHAPE_ERROR: return kExitIo;
    case HSBM_INVALID_ARGUMENT:
    case HSBM_CONFIG_ERROR:
    case HSBM_DIMENSION_ERROR:
    case HSBM_OUT_OF_RANGE:
    case HSBM_ASSUMPTION_VIOLATION:
    case HSBM_DEGENERATE_PATTERN: return kExitUsage;
    default: return kExitOther;
  }
}

// Carries a failure out of a subcommand.
struct Failure {
  int exit_code;
  std::string status;
  std::string message;
};

void Check(hsbm_status s) {
  if (s != HSBM_OK) {
    throw Failure{ExitCodeFor(s), hsbm_status_string(s),
                  hsbm_last_error_message()};
  }
}

[[noreturn]] void Fail(int code, const std::string& status,
                       const std::string& message) {
  throw Failure{code, status, message};
}

// Owns a string returned by the C API.
std::string Take(char* s) {
  std::string out = s != nullptr ? s : "";
  hsbm_free_string(s);
  return out;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(kExitIo, "IoError", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(kExitIo, "ParseError", path + ": " + e.what());
  }
}

void WriteOrPrint(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) Fail(kExitIo, "IoError", "cannot write " + out_path);
  f << text;
  if (!f) Fail(kExitIo, "IoError", "write failed for " + out_path);
}

struct ModelFlags {
  std::string config;
  int64_t n = 0;
  int c = 0;
  int d = 0;
  double sigma = 0.0;
  std::vector<double> dbar;
  double delta = 0.0;
  std::string pattern;
  bool self_loops = false;

  CLI::Option* n_opt = nullptr;
  CLI::Option* c_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* dbar_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* pattern_opt = nullptr;
  CLI::Option* loops_opt = nullptr;

  void Register(CLI::App* app, bool with_config) {
    if (with_config) {
      app->add_option("--config", config, "JSON file with model parameters");
    }
    n_opt = app->add_option("--n", n, "Number of nodes (1000)");
    c_opt = app->add_option("--c", c, "Number of classes (5)");
    d_opt = app->add_option("--d", d, "Feature dimension (c)");
    sigma_opt = app->add_option("--sigma", sigma, "Feature noise std (0.6)");
    dbar_opt = app->add_option("--dbar", dbar,
                               "Mean degree, or one value per class (25)")
                   ->delimiter(',');
    delta_opt = app->add_option("--delta", delta, "Topological noise std (0)");
    pattern_opt = app->add_option(
        "--pattern", pattern,
        "a=<v> | homophilous=<v> | group=<v> | file=<csv> (a=0.25)");
    loops_opt = app->add_flag("--self-loops", self_loops,
                              "Add self-loops when aggregating");
  }

  // Flags override the config file, which overrides the defaults.
  json ToJson() const {
    json j = config.empty() ? json::object() : ReadJsonFile(config);
    if (j.contains("params")) j = j.at("params");
    if (n_opt->count()) j["n"] = n;
    if (c_opt->count()) j["c"] = c;
    if (d_opt->count()) j["d"] = d;
    if (sigma_opt->count()) j["sigma"] = sigma;
    if (dbar_opt->count()) {
      if (dbar.size() == 1) {
        j["dbar"] = dbar[0];
      } else {
        j["dbar"] = dbar;
      }
    }
    if (delta_opt->count()) j["delta"] = delta;
    if (pattern_opt->count()) {
      j["pattern"] = pattern;
      j.erase("mhat");
    }
    if (loops_opt->count()) j["self_loops"] = self_loops;
    if (c_opt->count() && !d_opt->count() && !j.contains("d")) j["d"] = c;
    return j;
  }
};

class Params {
 public:
  explicit Params(const json& j) { Check(hsbm_params_create(j.dump().c_str(), &p_)); }
  ~Params() { hsbm_params_destroy(p_); }
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;
  const hsbm_params* get() const { return p_; }

 private:
  hsbm_params* p_ = nullptr;
};

class Graph {
 public:
  Graph() = default;
  ~Graph() { hsbm_graph_destroy(g_); }
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  hsbm_graph** out() { return &g_; }
  const hsbm_graph* get() const { return g_; }

 private:
  hsbm_graph* g_ = nullptr;
};

int RunGenerate(const ModelFlags& model, uint64_t seed, const std::string& out,
                bool as_json) {
  if (out.empty()) Fail(kExitUsage, "UsageError", "generate needs --out <dir>");
  Params params(model.ToJson());
  Graph graph;
  Check(hsbm_graph_generate(params.get(), seed, graph.out()));
  Check(hsbm_graph_save(graph.get(), out.c_str()));
  const json summary = json::parse(Take([&] {
    char* s = nullptr;
    Check(hsbm_graph_summary(graph.get(), &s));
    return s;
  }()));
  if (as_json) {
    std::cout << json{{"bundle", out}, {"summary", summary}}.dump(2) << "\n";
  } else {
    std::cout << "wrote " << out << ": n=" << summary["n"]
              << " edges=" << summary["num_edges"]
              << " zero-degree=" << summary["zero_degree_count"] << "\n";
  }
  return kExitOk;
}

int RunGains(const ModelFlags& model, const std::string& kind_flag, int layers,
             double varsigma, const std::string& out) {
  const json pj = model.ToJson();
  Params params(pj);
  std::string kind = kind_flag;
  if (kind.empty()) {
    if (layers > 1) {
      kind = "multi_gc";
    } else if (pj.value("delta", 0.0) > 0.0) {
      kind = "noisy_gc";
    } else {
      kind = "single_gc";
    }
  }
  char* s = nullptr;
  Check(hsbm_gains(params.get(), kind.c_str(), layers, varsigma, &s));
  WriteOrPrint(json::parse(Take(s)).dump(2) + "\n", out);
  return kExitOk;
}

int RunAudit(const std::string& bundle, double varsigma, const std::string& out,
             const std::string& pairs_csv) {
  Graph graph;
  Check(hsbm_graph_load(bundle.c_str(), graph.out()));
  char* s = nullptr;
  Check(hsbm_audit(graph.get(), varsigma, &s));
  const json report = json::parse(Take(s));
  WriteOrPrint(report.dump(2) + "\n", out);
  if (!pairs_csv.empty()) {
    std::ostringstream os;
    os << "t,k,gain\n";
    const auto& g = report["gains"]["gains"];
    for (size_t t = 0; t < g.size(); ++t) {
      for (size_t k = t + 1; k < g.size(); ++k) {
        os << t << "," << k << "," << g[t][k].dump() << "\n";
      }
    }
    WriteOrPrint(os.str(), pairs_csv);
  }
  return kExitOk;
}

int RunTrain(const std::string& bundle, const std::string& config,
             std::optional<int> layers, const std::string& precision,
             uint64_t seed, const std::string& out) {
  json cfg = config.empty() ? json::object() : ReadJsonFile(config);
  if (cfg.contains("train")) cfg = cfg.at("train");
  if (layers) cfg["layers"] = *layers;
  if (!precision.empty()) cfg["precision"] = precision;
  Graph graph;
  Check(hsbm_graph_load(bundle.c_str(), graph.out()));
  char* s = nullptr;
  Check(hsbm_train(graph.get(), cfg.dump().c_str(), seed, &s));
  WriteOrPrint(json::parse(Take(s)).dump(2) + "\n", out);
  return kExitOk;
}

struct SweepFlags {
  std::string kind;
  std::vector<double> grid;
  std::vector<uint64_t> seeds;
  std::vector<std::string> precisions;
  std::optional<int> layers;
  std::optional<double> varsigma;
  std::optional<int> workers;
};

int RunSweep(const ModelFlags& model, const SweepFlags& f,
             const std::string& out) {
  json spec = model.config.empty() ? json::object() : ReadJsonFile(model.config);
  // Model flags go into "params"; ModelFlags::ToJson already merged the file.
  spec["params"] = model.ToJson();
  if (!f.kind.empty()) spec["kind"] = f.kind;
  if (!f.grid.empty()) spec["grid"] = f.grid;
  if (!f.seeds.empty()) spec["seeds"] = f.seeds;
  if (!f.precisions.empty()) spec["precisions"] = f.precisions;
  if (f.varsigma) spec["varsigma"] = *f.varsigma;
  if (f.workers) spec["workers"] = *f.workers;
  if (f.layers) {
    if (spec.value("kind", std::string()) == "layers") {
      if (f.grid.empty()) {
        std::vector<int> grid;
        for (int l = 1; l <= *f.layers; ++l) grid.push_back(l);
        spec["grid"] = grid;
      }
    } else {
      spec["gcn_layers"] = *f.layers;
    }
  }
  if (out.empty()) {
    char* s = nullptr;
    Check(hsbm_sweep_run(spec.dump().c_str(), nullptr, &s));
    std::cout << Take(s);
  } else {
    Check(hsbm_sweep_run(spec.dump().c_str(), out.c_str(), nullptr));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterophilous SBM toolkit: generation, gains, audit, training "
               "and sweeps"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output and errors");

  uint64_t seed = 0;
  std::string out;
  double varsigma = 1.0;

  auto* gen = app.add_subcommand("generate", "Sample a graph bundle");
  ModelFlags gen_model;
  gen_model.Register(gen, true);
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--out", out, "Output bundle directory");
  gen->add_flag("--json", as_json, "Machine-readable output and errors");

  auto* gains = app.add_subcommand("gains", "Analytic separability gains");
  ModelFlags gains_model;
  gains_model.Register(gains, true);
  int layers = 1;
  std::string kind;
  gains->add_option("--layers", layers, "Stacked convolutions (1)");
  gains->add_option("--kind", kind, "single_gc | noisy_gc | multi_gc");
  gains->add_option("--varsigma", varsigma, "Verdict threshold (1.0)");
  gains->add_option("--out", out, "Write the report here");
  gains->add_flag("--json", as_json, "Machine-readable output and errors");

  auto* audit = app.add_subcommand("audit", "Empirical statistics and gains");
  std::string bundle;
  std::string pairs_csv;
  audit->add_option("bundle", bundle, "Bundle directory or header.json")
      ->required();
  audit->add_option("--varsigma", varsigma, "Verdict threshold (1.0)");
  audit->add_option("--out", out, "Write the report here");
  audit->add_option("--pairs-csv", pairs_csv, "Also write per-pair gains");
  audit->add_flag("--json", as_json, "Machine-readable output and errors");

  auto* train = app.add_subcommand("train", "Train MLP and GCN on a bundle");
  std::string train_config;
  std::optional<int> train_layers;
  std::string precision;
  train->add_option("bundle", bundle, "Bundle directory or header.json")
      ->required();
  train->add_option("--config", train_config, "JSON training config");
  train->add_option("--layers", train_layers, "Convolutions in the GCN (1)");
  train->add_option("--precision", precision, "single | double | extended")
      ->check(CLI::IsMember({"single", "double", "extended"}));
  train->add_option("--seed", seed, "Master seed");
  train->add_option("--out", out, "Write metrics here");
  train->add_flag("--json", as_json, "Machine-readable output and errors");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  ModelFlags sweep_model;
  sweep_model.Register(sweep, true);
  SweepFlags sf;
  sweep->add_option("--kind", sf.kind,
                    "pattern_a | homophilous | group | degree | noise | layers");
  sweep->add_option("--grid", sf.grid, "Comma-separated grid")->delimiter(',');
  sweep->add_option("--seeds", sf.seeds, "Comma-separated seeds")->delimiter(',');
  sweep->add_option("--seed", sf.seeds, "Single seed");
  sweep->add_option("--precision", sf.precisions,
                    "Tiers for layer sweeps (single,double)")
      ->delimiter(',')
      ->check(CLI::IsMember({"single", "double", "extended"}));
  sweep->add_option("--layers", sf.layers,
                    "Layer sweeps: max layer; otherwise GCN depth");
  sweep->add_option("--varsigma", sf.varsigma, "Verdict threshold (1.2)");
  sweep->add_option("--workers", sf.workers, "Worker threads (1)");
  sweep->add_option("--out", out, "CSV output path (stdout if absent)");
  sweep->add_flag("--json", as_json, "Machine-readable output and errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (as_json) {
      std::cout << json{{"error", {{"status", "UsageError"}, {"message", e.what()}}}}
                       .dump()
                << "\n";
    } else {
      app.exit(e);
    }
    return kExitUsage;
  }

  try {
    if (*gen) return RunGenerate(gen_model, seed, out, as_json);
    if (*gains) return RunGains(gains_model, kind, layers, varsigma, out);
    if (*audit) return RunAudit(bundle, varsigma, out, pairs_csv);
    if (*train) {
      return RunTrain(bundle, train_config, train_layers, precision, seed, out);
    }
    if (*sweep) return RunSweep(sweep_model, sf, out);
  } catch (const Failure& f) {
    if (as_json) {
      std::cout << json{{"error", {{"status", f.status}, {"message", f.message}}}}
                       .dump()
                << "\n";
    } else {
      std::cerr << "hsbm: " << f.status << ": " << f.message << "\n";
    }
    return f.exit_code;
  } catch (const json::exception& e) {
    if (as_json) {
      std::cout << json{{"error", {{"status", "ParseError"}, {"message", e.what()}}}}
                       .dump()
                << "\n";
    } else {
      std::cerr << "hsbm: " << e.what() << "\n";
    }
    return kExitIo;
  }
  return kExitOther;
}
