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

// Exercises libhsbm through its C interface only.

#include "hsbm/hsbm_c.h"

#include <cmath>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

using nlohmann::json;

// Takes ownership of a string returned by the library.
std::string Take(char* s) {
  std::string out = s != nullptr ? s : "";
  hsbm_free_string(s);
  return out;
}

hsbm_params* Params(const std::string& text) {
  hsbm_params* p = nullptr;
  EXPECT_EQ(hsbm_params_create(text.c_str(), &p), HSBM_OK)
      << hsbm_last_error_message();
  return p;
}

TEST(CApi, StatusStringsAndVersion) {
  EXPECT_STREQ(hsbm_status_string(HSBM_OK), "OK");
  EXPECT_STREQ(hsbm_status_string(HSBM_SHAPE_ERROR), "ShapeError");
  EXPECT_STREQ(hsbm_version(), "1.0.0");
}

TEST(CApi, ParamsRoundTrip) {
  hsbm_params* p = Params(R"({"n": 500, "pattern": "a=0.25", "dbar": 20})");
  char* text = nullptr;
  ASSERT_EQ(hsbm_params_to_json(p, &text), HSBM_OK);
  const json j = json::parse(Take(text));
  EXPECT_EQ(j["n"], 500);
  EXPECT_DOUBLE_EQ(j["mhat"][0][1].get<double>(), 0.5);
  hsbm_params_destroy(p);
}

TEST(CApi, ErrorsMapToStatusesWithMessages) {
  hsbm_params* p = nullptr;
  EXPECT_EQ(hsbm_params_create("{not json", &p), HSBM_PARSE_ERROR);
  EXPECT_STRNE(hsbm_last_error_message(), "");
  EXPECT_EQ(p, nullptr);
  EXPECT_EQ(hsbm_params_create(R"({"pattern": "a=0.5"})", &p), HSBM_OUT_OF_RANGE);
  EXPECT_EQ(hsbm_params_create(R"({"pattern": "a=0.2", "d": 3})", &p),
            HSBM_OK);
  hsbm_graph* g = nullptr;
  EXPECT_EQ(hsbm_graph_generate(p, 0, &g), HSBM_DIMENSION_ERROR);
  hsbm_params_destroy(p);
  // Feasibility is checked when edge probabilities are derived.
  ASSERT_EQ(hsbm_params_create(R"({"pattern": "a=0.3", "n": 100, "dbar": 90})", &p),
            HSBM_OK);
  EXPECT_EQ(hsbm_graph_generate(p, 0, &g), HSBM_INFEASIBLE_MODEL);
  hsbm_params_destroy(p);
  EXPECT_EQ(hsbm_graph_load("/nonexistent/bundle", &g), HSBM_IO_ERROR);
  EXPECT_EQ(hsbm_graph_num_nodes(nullptr, nullptr), HSBM_INVALID_ARGUMENT);
  // A successful call clears the message.
  EXPECT_EQ(hsbm_params_create("{}", &p), HSBM_OK);
  EXPECT_STREQ(hsbm_last_error_message(), "");
  hsbm_params_destroy(p);
}

TEST(CApi, GenerateSaveLoad) {
  hsbm_params* p = Params(R"({"n": 400, "pattern": "a=0.25"})");
  hsbm_graph* g = nullptr;
  ASSERT_EQ(hsbm_graph_generate(p, 7, &g), HSBM_OK);
  int64_t n = 0, m = 0;
  ASSERT_EQ(hsbm_graph_num_nodes(g, &n), HSBM_OK);
  ASSERT_EQ(hsbm_graph_num_edges(g, &m), HSBM_OK);
  EXPECT_EQ(n, 400);
  EXPECT_GT(m, 0);
  const auto dir = std::filesystem::temp_directory_path() / "hsbm_c_api_test";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(hsbm_graph_save(g, dir.c_str()), HSBM_OK);
  hsbm_graph* back = nullptr;
  ASSERT_EQ(hsbm_graph_load(dir.c_str(), &back), HSBM_OK);
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(hsbm_graph_summary(g, &a), HSBM_OK);
  ASSERT_EQ(hsbm_graph_summary(back, &b), HSBM_OK);
  const std::string sa = Take(a), sb = Take(b);
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(json::parse(sa)["num_edges"], m);
  hsbm_graph_destroy(back);
  hsbm_graph_destroy(g);
  hsbm_params_destroy(p);
}

TEST(CApi, Gains) {
  hsbm_params* p = Params(R"({"pattern": "a=0.25", "dbar": 25})");
  char* out = nullptr;
  ASSERT_EQ(hsbm_gains(p, "single_gc", 1, 1.2, &out), HSBM_OK);
  const json single = json::parse(Take(out));
  EXPECT_NEAR(single["gains"][0][1].get<double>(),
              std::sqrt(12.5) * std::sqrt(38.0) / 12.0, 1e-13);
  EXPECT_EQ(single["verdict"], "good");
  ASSERT_EQ(hsbm_gains(p, "multi_gc", 4, 1.2, &out), HSBM_OK);
  EXPECT_EQ(json::parse(Take(out))["layers"], 4);
  EXPECT_EQ(hsbm_gains(p, "bogus", 1, 1.2, &out), HSBM_INVALID_ARGUMENT);
  hsbm_params_destroy(p);
  p = Params(R"({"pattern": "homophilous=0.2"})");
  EXPECT_EQ(hsbm_gains(p, "multi_gc", 3, 1.2, &out), HSBM_DEGENERATE_PATTERN);
  hsbm_params_destroy(p);
  p = Params(R"({"pattern": "a=0.2", "dbar": [20, 25, 25, 25, 30], "delta": 0.01})");
  EXPECT_EQ(hsbm_gains(p, "noisy_gc", 1, 1.2, &out), HSBM_ASSUMPTION_VIOLATION);
  hsbm_params_destroy(p);
}

TEST(CApi, AuditExactGainsAndTraining) {
  hsbm_params* p = Params(R"({"n": 500, "pattern": "a=0.3"})");
  hsbm_graph* g = nullptr;
  ASSERT_EQ(hsbm_graph_generate(p, 3, &g), HSBM_OK);
  char* out = nullptr;
  ASSERT_EQ(hsbm_audit(g, 1.2, &out), HSBM_OK);
  EXPECT_EQ(json::parse(Take(out))["stats"]["n"], 500);
  ASSERT_EQ(hsbm_gains_exact(g, 3, 1.2, &out), HSBM_OK);
  EXPECT_EQ(json::parse(Take(out))["kind"], "multi_gc");
  ASSERT_EQ(hsbm_train(g, R"({"epochs": 80})", 3, &out), HSBM_OK)
      << hsbm_last_error_message();
  const json t = json::parse(Take(out));
  EXPECT_GT(t["mlp"]["accuracy"].get<double>(), 40.0);
  EXPECT_GT(t["gcn"]["accuracy"].get<double>(), t["mlp"]["accuracy"].get<double>());
  EXPECT_EQ(hsbm_train(g, R"({"gcn_mode": "third"})", 3, &out), HSBM_CONFIG_ERROR);
  hsbm_graph_destroy(g);
  hsbm_params_destroy(p);
}

TEST(CApi, Sweep) {
  const char* spec = R"({"kind": "pattern_a", "grid": [0.3], "seeds": [0],
                         "params": {"n": 300}, "train": {"epochs": 40}})";
  char* csv = nullptr;
  ASSERT_EQ(hsbm_sweep_run(spec, nullptr, &csv), HSBM_OK)
      << hsbm_last_error_message();
  const std::string text = Take(csv);
  EXPECT_EQ(text.rfind("sweep_kind,param,seed", 0), 0u);
  EXPECT_EQ(hsbm_sweep_run(R"({"workers": 0})", nullptr, &csv), HSBM_CONFIG_ERROR);
}

}  // namespace
