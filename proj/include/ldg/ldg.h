// Copyright 2026 The ldgraph Authors.
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

#ifndef LDG_LDG_H_
#define LDG_LDG_H_

/* C interface to the ldgraph library.
 *
 * Handles are opaque. Every function returns an ldg_status; on failure the
 * message is available from ldg_last_error() on the calling thread.
 * Structured inputs and outputs are JSON text. Output strings are allocated
 * by the library and released with ldg_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LDG_API __declspec(dllexport)
#else
#define LDG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ldg_status {
  LDG_OK = 0,
  LDG_ERR_INTERNAL = 1,
  LDG_ERR_INVALID = 2,        /* malformed input, shape or domain error */
  LDG_ERR_INFEASIBLE = 3,     /* well-formed but unrealisable request */
  LDG_ERR_NOT_CONVERGED = 4,  /* solver did not converge; output still written */
  LDG_ERR_RESOURCE = 5        /* enumeration budget or size limit exceeded */
} ldg_status;

typedef struct ldg_model ldg_model;
typedef struct ldg_graph ldg_graph;

LDG_API const char* ldg_version(void);
LDG_API const char* ldg_last_error(void);
LDG_API void ldg_string_free(char* s);

/* {"m": m, "mu": [...], "C": [[...]]} */
LDG_API ldg_status ldg_model_from_json(const char* json, ldg_model** out);
LDG_API void ldg_model_free(ldg_model* model);

LDG_API ldg_status ldg_graph_sample(const ldg_model* model, uint64_t n, uint64_t seed, ldg_graph** out);
/* {"omega_n": {"n", "counts"}, "varpi_n": {"n", "counts"}} */
LDG_API ldg_status ldg_graph_sample_conditional(const char* targets_json, uint64_t seed, ldg_graph** out);
LDG_API ldg_status ldg_graph_parse_edge_list(const char* text, ldg_graph** out);
LDG_API ldg_status ldg_graph_to_edge_list(const ldg_graph* graph, char** out);
/* {"edge_count", "L1", "L2", "M"} as exact counts. */
LDG_API ldg_status ldg_graph_measures_json(const ldg_graph* graph, char** out);
LDG_API size_t ldg_graph_vertex_count(const ldg_graph* graph);
LDG_API size_t ldg_graph_edge_count(const ldg_graph* graph);
LDG_API void ldg_graph_free(ldg_graph* graph);

/* {"rate": "J" | "I" | "I_omega" | "J_tilde" | "delta" | "zeta", ...inputs} */
LDG_API ldg_status ldg_rate_json(const char* request, char** out);
/* {"c": c, "d": {"pmf": [...], "infinite_mean": false}} */
LDG_API ldg_status ldg_degree_rate_json(const char* request, char** out);
/* {"model": {...}, "x": [...], "sizes": [...]} */
LDG_API ldg_status ldg_edge_rate_json(const char* request, char** out);
/* {"beta": [...], "c": [...]} */
LDG_API ldg_status ldg_ising_json(const char* request, char** out);
/* {"varpi": {...}, "nu": {...}, "n": n, "epsilon": e, "seed": s} */
LDG_API ldg_status ldg_approximate_json(const char* request, char** out);
/* {"model", "event": {"kind", "threshold", "a", "b"}, "sizes", "replicas",
 *  "replicas_per_size", "seed", "proposal", "threads"} */
LDG_API ldg_status ldg_tail_experiment_json(const char* request, char** out);
/* Runs acceptance suites; a failing criterion is reported in the output,
 * not through the status. */
LDG_API ldg_status ldg_validate_json(const char* config, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LDG_LDG_H_ */
