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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftrack/ftrack.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct RunSpec {
  std::string mode;
  std::string graph;
  std::string devices;
  std::string costs;
  double memory_limit = std::numeric_limits<double>::infinity();
  bool memory_limit_set = false;
  std::vector<int> counts;
  int threads = 1;
  uint64_t seed = 0;
  bool random_first_op = false;
  std::string out;
  std::string format;  // json, except csv for profile
  std::string trace;
  std::string kind = "chain";
  int n = 4;
  int k = 2;
  std::vector<int> k_values{8, 16, 32};
  int repeats = 3;
  int max_rank = 2;
  std::string policy = "min-memory";
  double alpha = 0.5;
  bool no_communication = false;
};

class Failure {
 public:
  explicit Failure(std::string msg) : msg_(std::move(msg)) {}
  const std::string& message() const { return msg_; }

 private:
  std::string msg_;
};

void check(ft_status s) {
  if (s != FT_OK) throw Failure(ft_last_error());
}

std::string take(char* s) {
  std::string out(s ? s : "");
  ft_string_free(s);
  return out;
}

std::string slurp(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(std::string(what) + " file '" + path + "' cannot be opened");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure("cannot write '" + path + "'");
}

struct Problem {
  ft_problem* p = nullptr;
  ~Problem() { ft_problem_free(p); }
};

struct Result {
  ft_result* r = nullptr;
  ~Result() { ft_result_free(r); }
};

ft_options options_of(const RunSpec& spec) {
  ft_options o;
  ft_options_default(&o);
  o.threads = spec.threads;
  o.seed = spec.seed;
  o.random_first_op = spec.random_first_op ? 1 : 0;
  o.max_rank = spec.max_rank;
  o.policy = spec.policy == "weighted" ? FT_POLICY_WEIGHTED : FT_POLICY_MIN_MEMORY;
  o.alpha = spec.alpha;
  o.communication = spec.no_communication ? 0 : 1;
  return o;
}

void load(const RunSpec& spec, const ft_options& o, Problem& prob) {
  if (spec.graph.empty()) throw Failure("--graph is required for mode " + spec.mode);
  const std::string graph = slurp(spec.graph, "graph");
  std::string devices, costs;
  if (!spec.devices.empty()) devices = slurp(spec.devices, "devices");
  if (!spec.costs.empty()) costs = slurp(spec.costs, "costs");
  const ft_status s = ft_problem_create(graph.c_str(), spec.devices.empty() ? nullptr : devices.c_str(),
                                        spec.costs.empty() ? nullptr : costs.c_str(), &o, &prob.p);
  if (s != FT_OK) {
    std::string msg = ft_last_error();
    if (s == FT_ERR_PARSE || s == FT_ERR_VALIDATION || s == FT_ERR_CYCLE_DETECTED) {
      if (msg.find("graph:") != std::string::npos) msg += " (file " + spec.graph + ")";
      if (msg.find("devices:") != std::string::npos) msg += " (file " + spec.devices + ")";
    }
    if (msg.find("costs:") != std::string::npos) msg += " (file " + spec.costs + ")";
    throw Failure(msg);
  }
}

std::string render(const RunSpec& spec, const ft_result* r) {
  char* text = nullptr;
  check(spec.format == "csv" ? ft_result_csv(r, &text) : ft_result_json(r, &text));
  return take(text);
}

void write_trace(const RunSpec& spec, const ft_result* r) {
  if (spec.trace.empty()) return;
  char* text = nullptr;
  check(ft_result_trace_json(r, &text));
  emit(spec.trace, take(text));
}

int run_frontier(const RunSpec& spec, bool constrained) {
  const ft_options o = options_of(spec);
  Problem prob;
  load(spec, o, prob);
  Result res;
  check(ft_solve(prob.p, &o, &res.r));
  write_trace(spec, res.r);
  if (!constrained) {
    emit(spec.out, render(spec, res.r));
    return kExitOk;
  }
  ptrdiff_t index = -1;
  check(ft_mini_time(res.r, spec.memory_limit, &index));
  if (index < 0) {
    std::cerr << "Infeasible: no strategy fits the memory limit\n";
    return kExitInfeasible;
  }
  Result one;
  check(ft_result_select(res.r, static_cast<size_t>(index), &one.r));
  emit(spec.out, render(spec, one.r));
  return kExitOk;
}

int run_mini_parallelism(const RunSpec& spec) {
  if (!spec.memory_limit_set) throw Failure("--memory-limit is required for mode mini-parallelism");
  if (spec.counts.empty()) throw Failure("--counts is required for mode mini-parallelism");
  const ft_options o = options_of(spec);
  Problem prob;
  load(spec, o, prob);
  Result res;
  int count = 0;
  size_t index = 0;
  const ft_status s = ft_mini_parallelism(prob.p, &o, spec.memory_limit, spec.counts.data(),
                                          spec.counts.size(), &count, &res.r, &index);
  if (s == FT_ERR_NO_FEASIBLE_COUNT) {
    std::cerr << "Infeasible: " << ft_last_error() << "\n";
    return kExitInfeasible;
  }
  check(s);
  write_trace(spec, res.r);
  Result one;
  check(ft_result_select(res.r, index, &one.r));
  emit(spec.out, render(spec, one.r));
  return kExitOk;
}

int run_profile(const RunSpec& spec) {
  if (!spec.memory_limit_set) throw Failure("--memory-limit is required for mode profile");
  if (spec.counts.empty()) throw Failure("--counts is required for mode profile");
  const ft_options o = options_of(spec);
  Problem prob;
  load(spec, o, prob);
  char* text = nullptr;
  int feasible = 0;
  check(ft_profile(prob.p, &o, spec.memory_limit, spec.counts.data(), spec.counts.size(),
                   spec.format == "json" ? 1 : 0, &feasible, &text));
  emit(spec.out, take(text));
  if (feasible == 0) {
    std::cerr << "Infeasible: no device count fits the memory limit\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_oracle_check(const RunSpec& spec) {
  const ft_options o = options_of(spec);
  Problem prob;
  load(spec, o, prob);
  int match = 0;
  char* report = nullptr;
  check(ft_oracle_check(prob.p, &o, &match, &report));
  emit(spec.out, take(report));
  return match ? kExitOk : kExitError;
}

int run_bench(const RunSpec& spec) {
  char* text = nullptr;
  check(ft_bench(spec.k_values.data(), spec.k_values.size(), spec.n, spec.repeats, spec.seed,
                 spec.threads, &text));
  emit(spec.out, take(text));
  return kExitOk;
}

int run_gen_fixture(const RunSpec& spec) {
  if (spec.out.empty()) throw Failure("--out <directory> is required for mode gen-fixture");
  Problem prob;
  check(ft_generate_fixture(spec.kind.c_str(), spec.n, spec.k, spec.seed, &prob.p));
  char* graph = nullptr;
  char* costs = nullptr;
  check(ft_problem_graph_json(prob.p, &graph));
  const std::string g = take(graph);
  check(ft_problem_costs_json(prob.p, &costs));
  const std::string c = take(costs);
  std::error_code ec;
  std::filesystem::create_directories(spec.out, ec);
  if (ec) throw Failure("cannot create '" + spec.out + "': " + ec.message());
  emit(spec.out + "/graph.json", g);
  emit(spec.out + "/costs.json", c);
  return kExitOk;
}

int dispatch(const RunSpec& spec) {
  if (spec.mode == "frontier") return run_frontier(spec, false);
  if (spec.mode == "mini-time") return run_frontier(spec, true);
  if (spec.mode == "mini-parallelism") return run_mini_parallelism(spec);
  if (spec.mode == "profile") return run_profile(spec);
  if (spec.mode == "oracle-check") return run_oracle_check(spec);
  if (spec.mode == "bench") return run_bench(spec);
  if (spec.mode == "gen-fixture") return run_gen_fixture(spec);
  throw Failure("unknown mode '" + spec.mode + "'");
}

}  // namespace

int main(int argc, char** argv) {
  RunSpec spec;
  CLI::App app{"Memory/time frontier of parallelization strategies"};
  app.add_option("--mode", spec.mode, "Mode to run")
      ->required()
      ->check(CLI::IsMember({"frontier", "mini-time", "mini-parallelism", "profile", "oracle-check",
                             "bench", "gen-fixture"}));
  app.add_option("--graph", spec.graph, "Computation graph JSON");
  app.add_option("--devices", spec.devices, "Device graph JSON");
  app.add_option("--costs", spec.costs, "Cost table JSON");
  auto* limit = app.add_option("--memory-limit", spec.memory_limit, "Per-device memory limit in bytes");
  app.add_option("--counts", spec.counts, "Candidate device counts, ascending")->delimiter(',');
  app.add_option("--threads", spec.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", spec.seed, "Seed for fixtures, benchmarks and --random-first-op");
  app.add_flag("--random-first-op", spec.random_first_op, "Start the backbone at a seeded random source");
  app.add_option("--out", spec.out, "Output file (directory for gen-fixture); stdout when omitted");
  app.add_option("--format", spec.format, "Output format (default json; csv for profile)")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--trace", spec.trace, "Write the elimination log as JSON");
  app.add_option("--kind", spec.kind, "Fixture kind")
      ->check(CLI::IsMember({"chain", "residual", "shared-input"}));
  app.add_option("--n", spec.n, "Fixture size, or chain length for bench")->check(CLI::PositiveNumber);
  app.add_option("--k", spec.k, "Configurations per fixture operator")->check(CLI::PositiveNumber);
  app.add_option("--k-values", spec.k_values, "K sweep for bench")->delimiter(',');
  app.add_option("--repeats", spec.repeats, "Bench repetitions (best is kept)")->check(CLI::PositiveNumber);
  app.add_option("--max-rank", spec.max_rank, "Maximum device mesh rank")->check(CLI::PositiveNumber);
  app.add_option("--policy", spec.policy, "Heuristic elimination policy")
      ->check(CLI::IsMember({"min-memory", "weighted"}));
  app.add_option("--alpha", spec.alpha, "Memory weight for the weighted policy");
  app.add_flag("--no-communication", spec.no_communication, "Zero synthetic communication costs");
  app.footer("Exit status: 0 success, 2 infeasible, 1 error.");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }
  spec.memory_limit_set = limit->count() > 0;
  if (spec.format.empty()) spec.format = spec.mode == "profile" ? "csv" : "json";
  if (spec.mode == "bench" && !app.count("--n")) spec.n = 16;
  try {
    return dispatch(spec);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message() << "\n";
    return kExitError;
  }
}
