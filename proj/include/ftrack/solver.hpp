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

#ifndef FTRACK_SOLVER_HPP_
#define FTRACK_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ftrack/config.hpp"
#include "ftrack/costmodel.hpp"
#include "ftrack/eliminate.hpp"
#include "ftrack/frontier.hpp"
#include "ftrack/graph.hpp"

namespace ftrack {

struct LdpOptions {
  int threads = 1;
  bool reduce_intermediate = true;  // false keeps every prefix tuple
  bool keep_cumulative = false;
};

struct LdpResult {
  Frontier frontier;
  std::vector<int> order;  // working operators from head to tail
  // cumulative[i][p]: prefix frontier ending at order[i] in config p.
  std::vector<std::vector<Frontier>> cumulative;
};

// Frontier of a linear working graph. Throws Error(kNotLinear).
LdpResult ldp(const ElimState& st, const LdpOptions& options = {});

// Node-eliminates the second operator until two remain, then enumerates the
// remaining configuration pairs. Throws Error(kNotLinear).
Frontier ft_elimination(ElimState st, int threads = 1);

struct FrontierPoint {
  double memory = 0.0;
  double time = 0.0;
  std::vector<int> strategy;  // config index per operator, aligned with g.operators()
};

struct SolveStats {
  ElimCounts eliminations;
  int ldp_steps = 0;
  std::size_t backbone_length = 0;
};

struct FrontierResult {
  std::vector<FrontierPoint> points;  // ascending memory, descending time
  SolveStats stats;
  std::vector<ElimRecord> log;
};

struct SolveOptions {
  ElimOptions elim;
  int threads = 1;
};

// Full strategy behind a frontier tuple. Throws Error(kBrokenProvenance) if
// an operator is assigned twice or never.
std::vector<int> unroll(const StrategyTuple& tuple, const ComputationGraph& g);

// Initialization, eliminations, LDP on the remaining chain, then unrolling.
FrontierResult ft(const ComputationGraph& g, const CostTables& tables,
                  const SolveOptions& options = {});

inline constexpr std::uint64_t kDefaultBruteForceLimit = 10'000'000;

// Enumerates every strategy. Throws Error(kTooLarge) above `limit`.
FrontierResult brute_force(const ComputationGraph& g, const CostTables& tables,
                           std::uint64_t limit = kDefaultBruteForceLimit);

// Index of the fastest point using at most `memory_limit`, if any.
std::optional<std::size_t> mini_time(const FrontierResult& result, double memory_limit);

using DeviceFamily = std::function<DeviceGraph(int device_count)>;

struct ParallelismOptions {
  SolveOptions solve;
  ConfigOptions config;
  SyntheticCostOptions costs;
};

// Solves the same graph for several device counts, caching one result per
// count. Configuration spaces and synthetic costs are rebuilt per count.
class ParallelismExplorer {
 public:
  ParallelismExplorer(ComputationGraph g, DeviceFamily family, ParallelismOptions options = {});

  const FrontierResult& result_for(int device_count);
  const ConfigSpace& space_for(int device_count);
  const ComputationGraph& graph() const { return graph_; }

 private:
  struct Entry {
    ConfigSpace space;
    FrontierResult result;
  };
  Entry& entry(int device_count);

  ComputationGraph graph_;
  DeviceFamily family_;
  ParallelismOptions options_;
  std::map<int, Entry> cache_;
};

struct ParallelismChoice {
  int device_count = 0;
  std::size_t point = 0;  // index into the result for that count
};

// Smallest count whose minimum-memory strategy fits `per_device_memory`.
// Throws Error(kNoFeasibleCount).
ParallelismChoice mini_parallelism(ParallelismExplorer& explorer, double per_device_memory,
                                   const std::vector<int>& counts);

struct ProfileRow {
  int device_count = 0;
  std::optional<double> min_time;  // empty when nothing fits
};

std::vector<ProfileRow> profile(ParallelismExplorer& explorer, double per_device_memory,
                                const std::vector<int>& counts);

}  // namespace ftrack

#endif  // FTRACK_SOLVER_HPP_
