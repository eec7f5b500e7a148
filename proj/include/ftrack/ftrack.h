/**
 * Copyright 2026 The ftrack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FTRACK_FTRACK_H_
#define FTRACK_FTRACK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FT_API __declspec(dllexport)
#else
#define FT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returns one of these; on failure
 * ft_last_error() describes the problem for the calling thread. */
typedef enum ft_status {
  FT_OK = 0,
  FT_ERR_INVALID_ARGUMENT = 1,
  FT_ERR_PARSE = 2,
  FT_ERR_VALIDATION = 3,
  FT_ERR_CYCLE_DETECTED = 4,
  FT_ERR_MISSING_COST = 5,
  FT_ERR_PROFILE_OUT_OF_RANGE = 6,
  FT_ERR_UNREACHABLE = 7,
  FT_ERR_INVALID_CONFIG = 8,
  FT_ERR_PRECONDITION = 9,
  FT_ERR_SPACE_EXPLOSION = 10,
  FT_ERR_NOT_LINEARIZABLE = 11,
  FT_ERR_NOT_LINEAR = 12,
  FT_ERR_TOO_LARGE = 13,
  FT_ERR_OVERLAPPING_STRATEGIES = 14,
  FT_ERR_BROKEN_PROVENANCE = 15,
  FT_ERR_NO_FEASIBLE_COUNT = 16,
  FT_ERR_IO = 17,
  FT_ERR_INTERNAL = 99
} ft_status;

typedef enum ft_policy { FT_POLICY_MIN_MEMORY = 0, FT_POLICY_WEIGHTED = 1 } ft_policy;

typedef struct ft_options {
  int threads;               /* worker threads, >= 1 */
  int random_first_op;       /* nonzero: seeded random backbone start */
  uint64_t seed;
  int max_rank;              /* device mesh rank bound */
  size_t composite_cap;      /* branch elimination limit */
  ft_policy policy;          /* heuristic elimination */
  double alpha;              /* memory weight for FT_POLICY_WEIGHTED */
  uint64_t brute_force_limit;
  int communication;         /* synthetic costs: zero t_s and t_x when 0 */
  double seconds_per_element;
} ft_options;

typedef struct ft_problem ft_problem;
typedef struct ft_result ft_result;

FT_API void ft_options_default(ft_options* out);

FT_API const char* ft_last_error(void);
FT_API const char* ft_status_name(ft_status status);
FT_API void ft_string_free(char* s);

/* graph_json is required. With devices_json the configurations are
 * enumerated; costs then come from costs_json if given (it must cover every
 * configuration) or from the synthetic model. Without devices_json the
 * configurations are opaque indices taken from costs_json, which is then
 * required. options may be NULL. */
FT_API ft_status ft_problem_create(const char* graph_json, const char* devices_json,
                                   const char* costs_json, const ft_options* options,
                                   ft_problem** out);
/* kind is "chain", "residual" or "shared-input". */
FT_API ft_status ft_generate_fixture(const char* kind, int n, int k, uint64_t seed,
                                     ft_problem** out);
FT_API void ft_problem_free(ft_problem* p);
FT_API size_t ft_problem_operator_count(const ft_problem* p);
FT_API ft_status ft_problem_graph_json(const ft_problem* p, char** out);
FT_API ft_status ft_problem_costs_json(const ft_problem* p, char** out);

FT_API ft_status ft_solve(const ft_problem* p, const ft_options* options, ft_result** out);
FT_API ft_status ft_brute_force(const ft_problem* p, const ft_options* options,
                                ft_result** out);
FT_API void ft_result_free(ft_result* r);

FT_API size_t ft_result_size(const ft_result* r);
FT_API ft_status ft_result_point(const ft_result* r, size_t index, double* memory_bytes,
                                 double* time_s);
/* Writes one configuration index per operator, in graph order; len must be
 * ft_problem_operator_count(). */
FT_API ft_status ft_result_strategy(const ft_result* r, size_t index, int* cfgs, size_t len);
FT_API ft_status ft_result_eliminations(const ft_result* r, int* node, int* edge, int* branch,
                                        int* heuristic);
/* New result holding only point `index` (strategy id 0). */
FT_API ft_status ft_result_select(const ft_result* r, size_t index, ft_result** out);
/* Device count a mini-parallelism result was solved for; 0 otherwise. */
FT_API int ft_result_device_count(const ft_result* r);
FT_API ft_status ft_result_json(const ft_result* r, char** out);
FT_API ft_status ft_result_csv(const ft_result* r, char** out);
FT_API ft_status ft_result_trace_json(const ft_result* r, char** out);
FT_API ft_status ft_validate_result_json(const char* json);

/* *index is -1 when nothing fits. */
FT_API ft_status ft_mini_time(const ft_result* r, double memory_limit, ptrdiff_t* index);

/* Both need a problem created with devices_json; the device file is rescaled
 * to each count and costs are synthetic. counts must be ascending. */
FT_API ft_status ft_mini_parallelism(const ft_problem* p, const ft_options* options,
                                     double per_device_memory, const int* counts,
                                     size_t n_counts, int* device_count, ft_result** result,
                                     size_t* index);
FT_API ft_status ft_profile(const ft_problem* p, const ft_options* options,
                            double per_device_memory, const int* counts, size_t n_counts,
                            int as_json, int* feasible_rows, char** out);

/* *match is 1 when ft and brute force give the same (memory, time) multiset;
 * report lists the differences. */
FT_API ft_status ft_oracle_check(const ft_problem* p, const ft_options* options, int* match,
                                 char** report);

/* Times ldp against ft_elimination on seeded chains of n_ops operators, best
 * of `repeats`, one row per K. CSV header "K,ldp_s,ft_elimination_s,ratio". */
FT_API ft_status ft_bench(const int* k_values, size_t n_k, int n_ops, int repeats,
                          uint64_t seed, int threads, char** csv);

#ifdef __cplusplus
}
#endif

#endif  /* FTRACK_FTRACK_H_ */
