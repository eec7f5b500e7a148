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

#include "ftrack/ftrack.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <map>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftrack/bench.hpp"
#include "ftrack/config.hpp"
#include "ftrack/costmodel.hpp"
#include "ftrack/error.hpp"
#include "ftrack/fixtures.hpp"
#include "ftrack/graph.hpp"
#include "ftrack/io.hpp"
#include "ftrack/solver.hpp"

struct ft_problem {
  ftrack::ComputationGraph graph;
  std::optional<ftrack::DeviceGraph> devices;
  std::optional<ftrack::ConfigSpace> space;
  ftrack::CostTables tables;
};

struct ft_result {
  ftrack::ComputationGraph graph;
  std::optional<ftrack::ConfigSpace> space;
  ftrack::FrontierResult result;
  std::optional<int> device_count;
};

namespace {

thread_local std::string g_last_error;

ft_status record(ftrack::ErrorCode code, const std::string& msg) {
  g_last_error = std::string(ftrack::error_code_name(code)) + ": " + msg;
  return static_cast<ft_status>(code);
}

template <class F>
ft_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FT_OK;
  } catch (const ftrack::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(ftrack::ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return record(ftrack::ErrorCode::kInternal, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) ftrack::fail(ftrack::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ft_options resolve(const ft_options* options) {
  ft_options o;
  ft_options_default(&o);
  if (options) o = *options;
  require(o.threads >= 1, "threads must be >= 1");
  require(o.max_rank >= 1, "max_rank must be >= 1");
  return o;
}

ftrack::SolveOptions solve_options(const ft_options& o) {
  ftrack::SolveOptions s;
  s.threads = o.threads;
  s.elim.threads = o.threads;
  s.elim.composite_cap = o.composite_cap;
  s.elim.policy = o.policy == FT_POLICY_WEIGHTED ? ftrack::HeuristicPolicy::kWeighted
                                                 : ftrack::HeuristicPolicy::kMinMemory;
  s.elim.alpha = o.alpha;
  if (o.random_first_op) s.elim.seed = o.seed;
  return s;
}

ftrack::SyntheticCostOptions cost_options(const ft_options& o) {
  ftrack::SyntheticCostOptions c;
  c.max_rank = o.max_rank;
  c.communication = o.communication != 0;
  c.seconds_per_element = o.seconds_per_element;
  return c;
}

// Prefixes parse and validation messages with the input they came from.
template <class F>
auto labelled(const char* label, F&& body) {
  try {
    return body();
  } catch (const ftrack::Error& e) {
    ftrack::fail(e.code(), std::string(label) + ": " + e.what());
  }
}

ft_result* wrap(const ft_problem& p, ftrack::FrontierResult r) {
  return new ft_result{p.graph, p.space, std::move(r), std::nullopt};
}

}  // namespace

extern "C" {

void ft_options_default(ft_options* out) {
  if (!out) return;
  out->threads = 1;
  out->random_first_op = 0;
  out->seed = 0;
  out->max_rank = 2;
  out->composite_cap = 4096;
  out->policy = FT_POLICY_MIN_MEMORY;
  out->alpha = 0.5;
  out->brute_force_limit = ftrack::kDefaultBruteForceLimit;
  out->communication = 1;
  out->seconds_per_element = 1e-9;
}

const char* ft_last_error(void) { return g_last_error.c_str(); }

const char* ft_status_name(ft_status status) {
  if (status == FT_OK) return "OK";
  return ftrack::error_code_name(static_cast<ftrack::ErrorCode>(status));
}

void ft_string_free(char* s) { delete[] s; }

ft_status ft_problem_create(const char* graph_json, const char* devices_json,
                            const char* costs_json, const ft_options* options,
                            ft_problem** out) {
  return guarded([&] {
    require(graph_json && out, "graph_json and out are required");
    *out = nullptr;
    const ft_options o = resolve(options);
    auto p = std::make_unique<ft_problem>();
    p->graph = labelled("graph", [&] { return ftrack::parse_graph_json(graph_json); });
    if (devices_json) {
      p->devices = labelled("devices", [&] { return ftrack::parse_devices_json(devices_json); });
      p->space = ftrack::ConfigSpace::enumerate(p->graph, p->devices->device_count(),
                                                ftrack::ConfigOptions{o.max_rank});
      if (costs_json) {
        p->tables = labelled("costs", [&] {
          return ftrack::parse_costs_json(costs_json, p->graph, &*p->space);
        });
      } else {
        p->tables = ftrack::build_cost_tables(p->graph, *p->space, *p->devices, cost_options(o));
      }
    } else {
      if (!costs_json) {
        ftrack::fail(ftrack::ErrorCode::kInvalidArgument, "either a device file or a cost file is required");
      }
      p->tables = labelled("costs", [&] { return ftrack::parse_costs_json(costs_json, p->graph); });
    }
    *out = p.release();
  });
}

ft_status ft_generate_fixture(const char* kind, int n, int k, uint64_t seed, ft_problem** out) {
  return guarded([&] {
    require(kind && out, "kind and out are required");
    *out = nullptr;
    auto f = ftrack::gen_fixture(ftrack::parse_fixture_kind(kind), n, k, seed);
    *out = new ft_problem{std::move(f.graph), std::nullopt, std::nullopt, std::move(f.tables)};
  });
}

void ft_problem_free(ft_problem* p) { delete p; }

size_t ft_problem_operator_count(const ft_problem* p) {
  return p ? p->graph.operator_count() : 0;
}

ft_status ft_problem_graph_json(const ft_problem* p, char** out) {
  return guarded([&] {
    require(p && out, "problem and out are required");
    *out = dup_string(ftrack::graph_to_json(p->graph));
  });
}

ft_status ft_problem_costs_json(const ft_problem* p, char** out) {
  return guarded([&] {
    require(p && out, "problem and out are required");
    *out = dup_string(ftrack::costs_to_json(p->graph, p->tables));
  });
}

ft_status ft_solve(const ft_problem* p, const ft_options* options, ft_result** out) {
  return guarded([&] {
    require(p && out, "problem and out are required");
    *out = nullptr;
    const ft_options o = resolve(options);
    *out = wrap(*p, ftrack::ft(p->graph, p->tables, solve_options(o)));
  });
}

ft_status ft_brute_force(const ft_problem* p, const ft_options* options, ft_result** out) {
  return guarded([&] {
    require(p && out, "problem and out are required");
    *out = nullptr;
    const ft_options o = resolve(options);
    *out = wrap(*p, ftrack::brute_force(p->graph, p->tables, o.brute_force_limit));
  });
}

void ft_result_free(ft_result* r) { delete r; }

size_t ft_result_size(const ft_result* r) { return r ? r->result.points.size() : 0; }

ft_status ft_result_point(const ft_result* r, size_t index, double* memory_bytes, double* time_s) {
  return guarded([&] {
    require(r && index < r->result.points.size(), "result index out of range");
    if (memory_bytes) *memory_bytes = r->result.points[index].memory;
    if (time_s) *time_s = r->result.points[index].time;
  });
}

ft_status ft_result_strategy(const ft_result* r, size_t index, int* cfgs, size_t len) {
  return guarded([&] {
    require(r && index < r->result.points.size(), "result index out of range");
    const auto& s = r->result.points[index].strategy;
    require(cfgs && len == s.size(), "cfgs must hold one entry per operator");
    std::copy(s.begin(), s.end(), cfgs);
  });
}

ft_status ft_result_eliminations(const ft_result* r, int* node, int* edge, int* branch,
                                 int* heuristic) {
  return guarded([&] {
    require(r, "result is required");
    const auto& e = r->result.stats.eliminations;
    if (node) *node = e.node;
    if (edge) *edge = e.edge;
    if (branch) *branch = e.branch;
    if (heuristic) *heuristic = e.heuristic;
  });
}

ft_status ft_result_select(const ft_result* r, size_t index, ft_result** out) {
  return guarded([&] {
    require(r && out && index < r->result.points.size(), "result index out of range");
    auto copy = std::make_unique<ft_result>(*r);
    copy->result.points = {r->result.points[index]};
    *out = copy.release();
  });
}

int ft_result_device_count(const ft_result* r) {
  return r && r->device_count ? *r->device_count : 0;
}

ft_status ft_result_json(const ft_result* r, char** out) {
  return guarded([&] {
    require(r && out, "result and out are required");
    *out = dup_string(ftrack::result_to_json(r->result, r->graph, r->space ? &*r->space : nullptr,
                                            r->device_count));
  });
}

ft_status ft_result_csv(const ft_result* r, char** out) {
  return guarded([&] {
    require(r && out, "result and out are required");
    *out = dup_string(ftrack::result_to_csv(r->result, r->device_count));
  });
}

ft_status ft_result_trace_json(const ft_result* r, char** out) {
  return guarded([&] {
    require(r && out, "result and out are required");
    *out = dup_string(ftrack::trace_to_json(r->result.log));
  });
}

ft_status ft_validate_result_json(const char* json) {
  return guarded([&] {
    require(json, "json is required");
    ftrack::validate_result_json(json);
  });
}

ft_status ft_mini_time(const ft_result* r, double memory_limit, ptrdiff_t* index) {
  return guarded([&] {
    require(r && index, "result and index are required");
    auto i = ftrack::mini_time(r->result, memory_limit);
    *index = i ? static_cast<ptrdiff_t>(*i) : -1;
  });
}

namespace {

ftrack::ParallelismExplorer explorer_for(const ft_problem& p, const ft_options& o) {
  if (!p.devices) {
    ftrack::fail(ftrack::ErrorCode::kInvalidArgument, "this mode needs a device file");
  }
  ftrack::ParallelismOptions po;
  po.solve = solve_options(o);
  po.config.max_rank = o.max_rank;
  po.costs = cost_options(o);
  const ftrack::DeviceGraph base = *p.devices;
  return ftrack::ParallelismExplorer(
      p.graph, [base](int count) { return base.with_device_count(count); }, po);
}

std::vector<int> count_list(const int* counts, size_t n) {
  require(counts && n > 0, "counts must not be empty");
  std::vector<int> v(counts, counts + n);
  for (int c : v) require(c >= 1, "device counts must be >= 1");
  return v;
}

}  // namespace

ft_status ft_mini_parallelism(const ft_problem* p, const ft_options* options,
                              double per_device_memory, const int* counts, size_t n_counts,
                              int* device_count, ft_result** result, size_t* index) {
  return guarded([&] {
    require(p && device_count, "problem and device_count are required");
    if (result) *result = nullptr;
    const ft_options o = resolve(options);
    auto ex = explorer_for(*p, o);
    const auto choice = ftrack::mini_parallelism(ex, per_device_memory, count_list(counts, n_counts));
    *device_count = choice.device_count;
    if (index) *index = choice.point;
    if (result) {
      *result = new ft_result{p->graph, ex.space_for(choice.device_count),
                              ex.result_for(choice.device_count), choice.device_count};
    }
  });
}

ft_status ft_profile(const ft_problem* p, const ft_options* options, double per_device_memory,
                     const int* counts, size_t n_counts, int as_json, int* feasible_rows,
                     char** out) {
  return guarded([&] {
    require(p && out, "problem and out are required");
    const ft_options o = resolve(options);
    auto ex = explorer_for(*p, o);
    const auto rows = ftrack::profile(ex, per_device_memory, count_list(counts, n_counts));
    if (feasible_rows) {
      *feasible_rows = static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                                      [](const auto& r) { return r.min_time.has_value(); }));
    }
    *out = dup_string(as_json ? ftrack::profile_to_json(rows) : ftrack::profile_to_csv(rows));
  });
}

ft_status ft_oracle_check(const ft_problem* p, const ft_options* options, int* match,
                          char** report) {
  return guarded([&] {
    require(p && match, "problem and match are required");
    const ft_options o = resolve(options);
    const auto fast = ftrack::ft(p->graph, p->tables, solve_options(o));
    const auto oracle = ftrack::brute_force(p->graph, p->tables, o.brute_force_limit);
    std::multimap<std::pair<double, double>, int> diff;
    for (const auto& pt : fast.points) diff.emplace(std::make_pair(pt.memory, pt.time), 1);
    for (const auto& pt : oracle.points) {
      auto it = diff.find({pt.memory, pt.time});
      if (it != diff.end() && it->second == 1) {
        diff.erase(it);
      } else {
        diff.emplace(std::make_pair(pt.memory, pt.time), 2);
      }
    }
    *match = diff.empty() ? 1 : 0;
    std::string text = diff.empty() ? "MATCH\n" : "MISMATCH\n";
    text += "ft_points " + std::to_string(fast.points.size()) + "\noracle_points " +
            std::to_string(oracle.points.size()) + "\nheuristic_eliminations " +
            std::to_string(fast.stats.eliminations.heuristic) + "\n";
    for (const auto& [key, side] : diff) {
      text += std::string(side == 1 ? "only_ft " : "only_oracle ") + ftrack::format_double(key.first) +
              "," + ftrack::format_double(key.second) + "\n";
    }
    if (report) *report = dup_string(text);
  });
}

ft_status ft_bench(const int* k_values, size_t n_k, int n_ops, int repeats, uint64_t seed,
                   int threads, char** csv) {
  return guarded([&] {
    require(k_values && n_k > 0 && csv, "k_values and csv are required");
    require(threads >= 1, "threads must be >= 1");
    const auto rows = ftrack::bench_linear(n_ops, std::vector<int>(k_values, k_values + n_k), repeats, seed, threads);
    std::string text = "K,ldp_s,ft_elimination_s,ratio\n";
    for (const auto& r : rows) {
      text += std::to_string(r.k) + "," + ftrack::format_double(r.ldp_s) + "," +
              ftrack::format_double(r.ft_elimination_s) + "," +
              ftrack::format_double(r.ft_elimination_s / r.ldp_s) + "\n";
    }
    *csv = dup_string(text);
  });
}

}  // extern "C"
