/* Copyright 2026 The HSBM Toolkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Stable C interface of libhsbm.
 *
 * Every call returns an hsbm_status. On failure the message of the last error
 * on the calling thread is available from hsbm_last_error_message(). Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with hsbm_free_string(). Structured inputs and outputs are JSON
 * documents.
 */

#ifndef HSBM_HSBM_C_H_
#define HSBM_HSBM_C_H_

#include <stdint.h>

#if defined(_WIN32)
#define HSBM_API __declspec(dllexport)
#else
#define HSBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hsbm_status {
  HSBM_OK = 0,
  HSBM_INVALID_ARGUMENT = 1,
  HSBM_INFEASIBLE_MODEL = 2,
  HSBM_DIMENSION_ERROR = 3,
  HSBM_OUT_OF_RANGE = 4,
  HSBM_ASSUMPTION_VIOLATION = 5,
  HSBM_DEGENERATE_PATTERN = 6,
  HSBM_PARSE_ERROR = 7,
  HSBM_SHAPE_ERROR = 8,
  HSBM_IO_ERROR = 9,
  HSBM_EMPTY_CLASS = 10,
  HSBM_CONFIG_ERROR = 11,
  HSBM_INTERNAL_ERROR = 12
} hsbm_status;

typedef struct hsbm_params hsbm_params;
typedef struct hsbm_graph hsbm_graph;

HSBM_API const char* hsbm_status_string(hsbm_status status);
/* Never NULL; empty when the last call on this thread succeeded. */
HSBM_API const char* hsbm_last_error_message(void);
HSBM_API void hsbm_free_string(char* s);
HSBM_API const char* hsbm_version(void);

/* Model parameters from JSON: n, c, d, eta, mean_scale, sigma, dbar (number or
 * per-class array), delta, self_loops, and either mhat (matrix) or pattern
 * ("a=0.25", "homophilous=0.6", "group=0.1", "file=path.csv"). */
HSBM_API hsbm_status hsbm_params_create(const char* json, hsbm_params** out);
HSBM_API hsbm_status hsbm_params_to_json(const hsbm_params* params,
                                         char** out_json);
HSBM_API void hsbm_params_destroy(hsbm_params* params);

HSBM_API hsbm_status hsbm_graph_generate(const hsbm_params* params,
                                         uint64_t seed, hsbm_graph** out);
/* Accepts a bundle directory or its header.json. */
HSBM_API hsbm_status hsbm_graph_load(const char* path, hsbm_graph** out);
HSBM_API hsbm_status hsbm_graph_save(const hsbm_graph* graph,
                                     const char* dir);
HSBM_API hsbm_status hsbm_graph_num_nodes(const hsbm_graph* graph,
                                          int64_t* out);
HSBM_API hsbm_status hsbm_graph_num_edges(const hsbm_graph* graph,
                                          int64_t* out);
/* {"n", "c", "d", "num_edges", "zero_degree_count", "class_counts"}. */
HSBM_API hsbm_status hsbm_graph_summary(const hsbm_graph* graph,
                                        char** out_json);
HSBM_API void hsbm_graph_destroy(hsbm_graph* graph);

/* Analytic gains. kind: "single_gc", "noisy_gc", "multi_gc" (approximate
 * closed form, needs layers >= 1). */
HSBM_API hsbm_status hsbm_gains(const hsbm_params* params, const char* kind,
                                int layers, double varsigma, char** out_json);
/* Exact stacked-convolution gains on a graph, using its empirical pattern. */
HSBM_API hsbm_status hsbm_gains_exact(const hsbm_graph* graph, int layers,
                                      double varsigma, char** out_json);

/* Empirical statistics plus single-convolution gains. */
HSBM_API hsbm_status hsbm_audit(const hsbm_graph* graph, double varsigma,
                                char** out_json);

/* Trains the MLP and the GCN on a graph with features. config_json may be
 * NULL; otherwise it holds the training grid plus optional "layers",
 * "precision", "self_loops" and "gcn_mode" ("pre" | "second_layer").
 * Output: {"mlp": metrics, "gcn": metrics}. */
HSBM_API hsbm_status hsbm_train(const hsbm_graph* graph,
                                const char* config_json, uint64_t seed,
                                char** out_json);

/* Runs a sweep described by spec_json. When csv_path is not NULL the table is
 * written there; the CSV text is also returned through out_csv if non-NULL. */
HSBM_API hsbm_status hsbm_sweep_run(const char* spec_json,
                                    const char* csv_path, char** out_csv);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HSBM_HSBM_C_H_ */
