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

#ifndef FTRACK_ELIMINATE_HPP_
#define FTRACK_ELIMINATE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftrack/costmodel.hpp"
#include "ftrack/frontier.hpp"
#include "ftrack/graph.hpp"

namespace ftrack {

// Frontiers of one working edge, one per (src config, dst config) pair.
struct EdgeFrontiers {
  int src_k = 0;
  int dst_k = 0;
  std::vector<Frontier> cells;

  EdgeFrontiers() = default;
  EdgeFrontiers(int src_k, int dst_k)
      : src_k(src_k), dst_k(dst_k), cells(static_cast<std::size_t>(src_k * dst_k)) {}

  Frontier& at(int s, int d) { return cells[static_cast<std::size_t>(s * dst_k + d)]; }
  const Frontier& at(int s, int d) const { return cells[static_cast<std::size_t>(s * dst_k + d)]; }
};

enum class ElimKind { kNode, kEdge, kBranch, kHeuristic };

const char* elim_kind_name(ElimKind kind);

// One log entry. The per-tuple generating choices live in the traces of the
// frontiers the step produced; records_count is the number of such tuples.
struct ElimRecord {
  ElimKind kind = ElimKind::kNode;
  std::vector<int> eliminated_ops;
  std::vector<int> eliminated_edges;
  int new_entity = -1;  // new edge id (node, edge) or receiving operator id
  std::size_t records_count = 0;
  std::optional<Assignment> fixed_choice;  // heuristic only
};

enum class HeuristicPolicy { kMinMemory, kWeighted };

struct ElimOptions {
  int threads = 1;
  std::size_t composite_cap = 4096;
  HeuristicPolicy policy = HeuristicPolicy::kMinMemory;
  double alpha = 0.5;  // memory weight for kWeighted
  std::optional<std::uint64_t> seed;  // randomizes the first marked operator
};

struct ElimCounts {
  int node = 0;
  int edge = 0;
  int branch = 0;
  int heuristic = 0;

  int total() const { return node + edge + branch + heuristic; }
};

// Working graph plus the frontiers of its surviving operators and edges.
struct ElimState {
  ComputationGraph working;
  std::map<int, std::vector<Frontier>> op_frontiers;
  std::map<int, EdgeFrontiers> edge_frontiers;
  // Receiver op -> (receiver config, merged config) for each composite index
  // produced by its latest branch elimination.
  std::map<int, std::vector<std::pair<int, int>>> composite_spaces;
  std::vector<ElimRecord> log;
  LinearBackbone backbone;
  std::optional<int> first_op;
  int next_edge_id = 0;

  // Singleton frontiers straight from the cost tables.
  static ElimState initialize(const ComputationGraph& g, const CostTables& tables,
                              std::optional<std::uint64_t> seed = {});

  int config_count(int op) const;
  void refresh_marking();
  ElimCounts counts() const;
};

// Replaces e_hi, o_i, e_ij by a new edge e_hj.
void node_eliminate(ElimState& st, int op, int threads = 1);
// Merges every edge src -> dst into one.
void edge_eliminate(ElimState& st, int src, int dst, int threads = 1);
// Folds `merged`, whose only edge joins it to `receiver`, into `receiver`.
// The receiver's configurations become (receiver cfg, merged cfg) pairs.
void branch_eliminate(ElimState& st, int merged, int receiver, const ElimOptions& options = {});
// Fixes the configuration of `op` by policy and folds its edges into the
// neighbours. Returns the fixed configuration index.
int heuristic_eliminate(ElimState& st, int op, const ElimOptions& options = {});

// Applies eliminations (node, then edge, then branch, else one heuristic)
// until none applies. Throws Error(kNotLinearizable) when the result is not a
// chain.
ElimCounts run_eliminations(ElimState& st, const ElimOptions& options = {});

}  // namespace ftrack

#endif  // FTRACK_ELIMINATE_HPP_
