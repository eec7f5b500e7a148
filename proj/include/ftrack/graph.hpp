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

#ifndef FTRACK_GRAPH_HPP_
#define FTRACK_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftrack {

using Shape = std::vector<std::int64_t>;

std::int64_t element_count(const Shape& shape);

struct Operator {
  int id = 0;
  std::string name;
  // Parameter tensors first; the last entry is the operator's output tensor.
  std::vector<Shape> tensor_shapes;
  bool is_input = false;
  bool is_output = false;

  const Shape& output_shape() const { return tensor_shapes.back(); }
  std::size_t parameter_count() const {
    return tensor_shapes.empty() ? 0 : tensor_shapes.size() - 1;
  }
};

struct Edge {
  int id = 0;
  int src = 0;
  int dst = 0;
  Shape tensor_shape;
};

// Directed multigraph of operators. Edges are keyed by id so that parallel
// edges between the same pair of operators stay distinct.
class ComputationGraph {
 public:
  ComputationGraph() = default;

  void add_operator(Operator op);
  void add_edge(Edge edge);
  void remove_operator(int id);
  void remove_edge(int id);

  const std::vector<Operator>& operators() const { return operators_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t operator_count() const { return operators_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_operator(int id) const { return op_index_.count(id) != 0; }
  bool has_edge(int id) const { return edge_index_.count(id) != 0; }
  const Operator& op(int id) const;
  const Edge& edge(int id) const;
  // Position of the operator in operators(); stable until the next removal.
  std::size_t op_position(int id) const;
  std::size_t edge_position(int id) const;

  // Edge ids in ascending order.
  std::vector<int> in_edges(int op) const;
  std::vector<int> out_edges(int op) const;
  std::vector<int> incident_edges(int op) const;
  // Distinct neighbouring operator ids in ascending order.
  std::vector<int> successors(int op) const;
  std::vector<int> predecessors(int op) const;

  int max_edge_id() const;

  // Checks the structural invariants of an input graph: unique ids, positive
  // dimensions, no self loops, acyclic, every operator reachable from an
  // operator flagged is_input. Throws Error(kValidation / kCycleDetected).
  void validate() const;

 private:
  void reindex();

  std::vector<Operator> operators_;
  std::vector<Edge> edges_;
  std::map<int, std::size_t> op_index_;
  std::map<int, std::size_t> edge_index_;
};

// Kahn's algorithm, ties broken by ascending operator id.
// Throws Error(kCycleDetected).
std::vector<int> topological_order(const ComputationGraph& g);

struct LinearBackbone {
  std::vector<int> marked;

  bool contains(int op) const;
};

// The operator a backbone starts from: the source with the smallest id, or a
// seeded random source when `seed` is set.
std::optional<int> first_operator(const ComputationGraph& g,
                                  std::optional<std::uint64_t> seed = {});

// Marks `first`, then keeps appending the unique downstream operator of the
// last marked operator while there is exactly one.
LinearBackbone mark_backbone_from(const ComputationGraph& g, int first);
LinearBackbone mark_backbone(const ComputationGraph& g,
                             std::optional<std::uint64_t> seed = {});

// True iff the operators can be ordered so that every edge joins consecutive
// operators in that order and every consecutive pair is joined.
bool is_linear(const ComputationGraph& g);

// Order of a linear graph from its head to its tail. Throws Error(kNotLinear).
std::vector<int> linear_order(const ComputationGraph& g);

struct BandwidthPoint {
  int log2_bytes = 0;
  double bandwidth = 0.0;  // bytes per second
};

struct BandwidthProfile {
  std::vector<BandwidthPoint> points;
  double latency = 0.0;  // seconds per collective call

  // Throws Error(kValidation) on unordered points or non-positive bandwidth.
  void validate() const;
  // Profiled times (2^i / bandwidth) never decrease; with linear bandwidth
  // interpolation this makes comm_time monotone.
  bool has_monotone_times() const;
};

// A device partitioning scheme: the devices are split into disjoint groups
// and each group runs the same collective.
struct PartitionScheme {
  std::string id;
  std::vector<int> group_sizes;
  BandwidthProfile profile;
};

class DeviceGraph {
 public:
  DeviceGraph() = default;
  DeviceGraph(int device_count, std::vector<PartitionScheme> schemes);

  // A device graph where every group size g dividing `device_count` gets the
  // same profile.
  static DeviceGraph uniform(int device_count, const BandwidthProfile& profile);

  int device_count() const { return device_count_; }
  const std::vector<PartitionScheme>& schemes() const { return schemes_; }

  // Scheme used by a collective running in groups of `group_size` devices.
  // Lookup order: exact partition match, then any scheme whose groups all
  // have that size, then a scheme named "default". Throws Error(kValidation).
  const PartitionScheme& scheme_for_group(int group_size) const;

  // Same schemes and profiles, different device count.
  DeviceGraph with_device_count(int device_count) const;

  void validate() const;

 private:
  int device_count_ = 1;
  std::vector<PartitionScheme> schemes_;
};

}  // namespace ftrack

#endif  // FTRACK_GRAPH_HPP_
