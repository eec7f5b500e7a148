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

#ifndef FTRACK_COSTMODEL_HPP_
#define FTRACK_COSTMODEL_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ftrack/config.hpp"
#include "ftrack/graph.hpp"

namespace ftrack {

struct OperatorCost {
  double m_p = 0.0;  // parameter bytes
  double m_t = 0.0;  // temporary tensor bytes
  double t_c = 0.0;  // compute seconds, forward + backward
  double t_s = 0.0;  // synchronization seconds

  double memory() const { return m_p + m_t; }
  double time() const { return t_c + t_s; }
};

// Edges carry no memory; only the transfer time.
struct EdgeCost {
  double t_x = 0.0;
};

// Time of one collective moving `bytes` under `profile`: latency plus bytes
// over the bandwidth interpolated linearly between the bracketing profiled
// powers of two. Sizes below the first profiled point use its bandwidth.
// Throws Error(kProfileOutOfRange) past the last profiled point.
double comm_time(std::uint64_t bytes, const BandwidthProfile& profile);

// Layout of one tensor: a mesh plus a tensor map. Fully replicated layouts are
// canonicalized to mesh [device_count] so every mesh shares one such state.
struct SplitState {
  DeviceMesh mesh;
  TensorMap map;

  bool is_replicated() const { return map.is_unsplit(); }
  auto operator<=>(const SplitState&) const = default;
};

SplitState canonical_state(SplitState s, int device_count);

// Shortest-path planner over the layouts of one tensor shape. Transitions are
// single collectives: all-gather along a mesh dim, a local slice, or an
// all-to-all moving a mesh dim between tensor dims.
class ReschedulePlanner {
 public:
  ReschedulePlanner(Shape shape, const DeviceGraph& dev, int max_rank = 2,
                    int dtype_bytes = 4);

  const std::vector<SplitState>& states() const { return states_; }
  std::size_t index_of(const SplitState& s) const;

  // Cached single-source shortest paths. Throws Error(kUnreachable).
  double time(const SplitState& from, const SplitState& to) const;
  double time(std::size_t from, std::size_t to) const;

  struct Transition {
    std::size_t to;
    double seconds;
  };
  const std::vector<Transition>& transitions(std::size_t from) const { return adj_[from]; }

  std::uint64_t local_bytes(const SplitState& s) const;

 private:
  std::vector<double> shortest_from(std::size_t from) const;

  Shape shape_;
  int device_count_;
  int dtype_bytes_;
  std::vector<SplitState> states_;
  std::map<SplitState, std::size_t> index_;
  std::vector<std::vector<Transition>> adj_;
  mutable std::map<std::size_t, std::vector<double>> cache_;
};

double reschedule_time(const SplitState& from, const SplitState& to, const Shape& shape,
                       const DeviceGraph& dev, int max_rank = 2, int dtype_bytes = 4);

// Dense cost tables over the configuration indices of every operator and
// every (src, dst) configuration pair of every edge.
class CostTables {
 public:
  CostTables() = default;
  // config_counts maps each operator id of `g` to its K.
  CostTables(const ComputationGraph& g, const std::map<int, int>& config_counts);

  int config_count(int op) const;
  const std::map<int, int>& config_counts() const { return k_; }

  const OperatorCost& op(int op, int cfg) const;
  OperatorCost& op(int op, int cfg);
  const EdgeCost& edge(int edge, int src_cfg, int dst_cfg) const;
  EdgeCost& edge(int edge, int src_cfg, int dst_cfg);

  // Records presence for file-backed tables.
  void set_op(int op, int cfg, const OperatorCost& cost);
  void set_edge(int edge, int src_cfg, int dst_cfg, const EdgeCost& cost);
  // Throws Error(kMissingCost) naming the first key never set.
  void require_complete() const;

 private:
  struct EdgeTable {
    int src = 0;
    int dst = 0;
    int src_k = 0;
    int dst_k = 0;
    std::vector<EdgeCost> costs;
    std::vector<bool> present;
  };
  std::map<int, int> k_;
  std::map<int, std::vector<OperatorCost>> ops_;
  std::map<int, std::vector<bool>> op_present_;
  std::map<int, EdgeTable> edges_;
};

// Closed-form stand-in for measured operator costs, used to generate
// fixtures. Not a performance model.
struct SyntheticCostOptions {
  int dtype_bytes = 4;
  int max_rank = 2;
  double seconds_per_element = 1e-9;
  bool communication = true;  // false zeroes t_s and t_x
};

// Per-device cost of running `op` under `cfg`:
//   m_p = parameter shard bytes, m_t = output shard bytes,
//   t_c = seconds_per_element * output shard elements,
//   t_s = ring all-reduce of each parameter's gradient over the mesh dims
//         that split the output but not the parameter.
OperatorCost synthetic_operator_cost(const Operator& op, const ParallelConfig& cfg,
                                     const DeviceGraph& dev,
                                     const SyntheticCostOptions& options = {});

// Layout of an edge tensor as produced by the source (or required by the
// destination): the operator's output map applied position by position,
// dropping splits that do not divide the edge tensor.
SplitState edge_layout(const Shape& edge_shape, const ParallelConfig& cfg, int device_count);

CostTables build_cost_tables(const ComputationGraph& g, const ConfigSpace& space,
                             const DeviceGraph& dev, const SyntheticCostOptions& options = {});

// Same, but operator costs come from `op_costs`; edges are still planned.
CostTables build_cost_tables(const ComputationGraph& g, const ConfigSpace& space,
                             const DeviceGraph& dev, const CostTables& op_costs,
                             const SyntheticCostOptions& options = {});

struct TotalCost {
  double memory = 0.0;
  double time = 0.0;
  double communication = 0.0;  // sum of t_s and t_x
};

// `strategy` holds one configuration index per operator, aligned with
// g.operators().
TotalCost total_cost(std::span<const int> strategy, const ComputationGraph& g,
                     const CostTables& tables);

}  // namespace ftrack

#endif  // FTRACK_COSTMODEL_HPP_
