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

#include "ftrack/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "ftrack/error.hpp"

namespace ftrack {

std::int64_t element_count(const Shape& shape) {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

void ComputationGraph::add_operator(Operator op) {
  if (op_index_.count(op.id)) {
    fail(ErrorCode::kValidation, "duplicate operator id " + std::to_string(op.id));
  }
  op_index_[op.id] = operators_.size();
  operators_.push_back(std::move(op));
}

void ComputationGraph::add_edge(Edge edge) {
  if (edge_index_.count(edge.id)) {
    fail(ErrorCode::kValidation, "duplicate edge id " + std::to_string(edge.id));
  }
  if (edge.src == edge.dst) {
    fail(ErrorCode::kValidation, "edge " + std::to_string(edge.id) + " is a self loop");
  }
  if (!has_operator(edge.src) || !has_operator(edge.dst)) {
    fail(ErrorCode::kValidation,
         "edge " + std::to_string(edge.id) + " references an unknown operator");
  }
  edge_index_[edge.id] = edges_.size();
  edges_.push_back(std::move(edge));
}

void ComputationGraph::remove_operator(int id) {
  if (!has_operator(id)) {
    fail(ErrorCode::kInvalidArgument, "no operator " + std::to_string(id));
  }
  operators_.erase(operators_.begin() + static_cast<std::ptrdiff_t>(op_index_.at(id)));
  std::erase_if(edges_, [id](const Edge& e) { return e.src == id || e.dst == id; });
  reindex();
}

void ComputationGraph::remove_edge(int id) {
  if (!has_edge(id)) {
    fail(ErrorCode::kInvalidArgument, "no edge " + std::to_string(id));
  }
  edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(edge_index_.at(id)));
  reindex();
}

void ComputationGraph::reindex() {
  op_index_.clear();
  edge_index_.clear();
  for (std::size_t i = 0; i < operators_.size(); ++i) op_index_[operators_[i].id] = i;
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_[edges_[i].id] = i;
}

const Operator& ComputationGraph::op(int id) const {
  auto it = op_index_.find(id);
  if (it == op_index_.end()) {
    fail(ErrorCode::kInvalidArgument, "no operator " + std::to_string(id));
  }
  return operators_[it->second];
}

const Edge& ComputationGraph::edge(int id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) {
    fail(ErrorCode::kInvalidArgument, "no edge " + std::to_string(id));
  }
  return edges_[it->second];
}

std::size_t ComputationGraph::op_position(int id) const {
  auto it = op_index_.find(id);
  if (it == op_index_.end()) {
    fail(ErrorCode::kInvalidArgument, "no operator " + std::to_string(id));
  }
  return it->second;
}

std::size_t ComputationGraph::edge_position(int id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) {
    fail(ErrorCode::kInvalidArgument, "no edge " + std::to_string(id));
  }
  return it->second;
}

std::vector<int> ComputationGraph::in_edges(int op) const {
  std::vector<int> out;
  for (const auto& [id, pos] : edge_index_) {
    if (edges_[pos].dst == op) out.push_back(id);
  }
  return out;
}

std::vector<int> ComputationGraph::out_edges(int op) const {
  std::vector<int> out;
  for (const auto& [id, pos] : edge_index_) {
    if (edges_[pos].src == op) out.push_back(id);
  }
  return out;
}

std::vector<int> ComputationGraph::incident_edges(int op) const {
  std::vector<int> out;
  for (const auto& [id, pos] : edge_index_) {
    if (edges_[pos].src == op || edges_[pos].dst == op) out.push_back(id);
  }
  return out;
}

std::vector<int> ComputationGraph::successors(int op) const {
  std::set<int> s;
  for (const auto& e : edges_) {
    if (e.src == op) s.insert(e.dst);
  }
  return {s.begin(), s.end()};
}

std::vector<int> ComputationGraph::predecessors(int op) const {
  std::set<int> s;
  for (const auto& e : edges_) {
    if (e.dst == op) s.insert(e.src);
  }
  return {s.begin(), s.end()};
}

int ComputationGraph::max_edge_id() const {
  return edge_index_.empty() ? -1 : edge_index_.rbegin()->first;
}

void ComputationGraph::validate() const {
  for (const auto& op : operators_) {
    if (op.tensor_shapes.empty()) {
      fail(ErrorCode::kValidation, "operator " + std::to_string(op.id) + " has no tensors");
    }
    for (const auto& shape : op.tensor_shapes) {
      for (auto d : shape) {
        if (d < 1) {
          fail(ErrorCode::kValidation,
               "operator " + std::to_string(op.id) + " has a dimension < 1");
        }
      }
    }
  }
  for (const auto& e : edges_) {
    for (auto d : e.tensor_shape) {
      if (d < 1) {
        fail(ErrorCode::kValidation, "edge " + std::to_string(e.id) + " has a dimension < 1");
      }
    }
  }
  topological_order(*this);

  // Reachability from the flagged inputs.
  std::set<int> seen;
  std::vector<int> stack;
  for (const auto& op : operators_) {
    if (op.is_input) {
      seen.insert(op.id);
      stack.push_back(op.id);
    }
  }
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int next : successors(cur)) {
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  for (const auto& op : operators_) {
    if (!seen.count(op.id)) {
      fail(ErrorCode::kValidation, "operator " + std::to_string(op.id) +
                                       " is not reachable from any is_input operator");
    }
  }
}

std::vector<int> topological_order(const ComputationGraph& g) {
  std::map<int, int> indegree;
  for (const auto& op : g.operators()) indegree[op.id] = 0;
  std::map<int, std::vector<int>> out;
  for (const auto& e : g.edges()) {
    ++indegree[e.dst];
    out[e.src].push_back(e.dst);
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<int> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    int cur = ready.top();
    ready.pop();
    order.push_back(cur);
    for (int next : out[cur]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (order.size() != g.operator_count()) {
    fail(ErrorCode::kCycleDetected, "computation graph has a cycle");
  }
  return order;
}

bool LinearBackbone::contains(int op) const {
  return std::find(marked.begin(), marked.end(), op) != marked.end();
}

std::optional<int> first_operator(const ComputationGraph& g,
                                  std::optional<std::uint64_t> seed) {
  std::set<int> sources;
  for (const auto& op : g.operators()) sources.insert(op.id);
  for (const auto& e : g.edges()) sources.erase(e.dst);
  if (sources.empty()) return std::nullopt;
  if (!seed) return *sources.begin();
  std::mt19937_64 rng(*seed);
  std::uniform_int_distribution<std::size_t> pick(0, sources.size() - 1);
  return *std::next(sources.begin(), static_cast<std::ptrdiff_t>(pick(rng)));
}

LinearBackbone mark_backbone_from(const ComputationGraph& g, int first) {
  LinearBackbone backbone;
  if (!g.has_operator(first)) return backbone;
  backbone.marked.push_back(first);
  while (true) {
    auto next = g.successors(backbone.marked.back());
    if (next.size() != 1 || backbone.contains(next.front())) break;
    backbone.marked.push_back(next.front());
  }
  return backbone;
}

LinearBackbone mark_backbone(const ComputationGraph& g, std::optional<std::uint64_t> seed) {
  auto first = first_operator(g, seed);
  if (!first) return {};
  return mark_backbone_from(g, *first);
}

namespace {

// Returns the chain order or nullopt when the graph is not a chain.
std::optional<std::vector<int>> chain_order(const ComputationGraph& g) {
  if (g.operator_count() == 0) return std::vector<int>{};
  std::vector<int> order;
  try {
    order = topological_order(g);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<bool> joined(order.size(), false);
  for (const auto& e : g.edges()) {
    if (pos[e.dst] != pos[e.src] + 1) return std::nullopt;
    joined[pos[e.src]] = true;
  }
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (!joined[i]) return std::nullopt;
  }
  return order;
}

}  // namespace

bool is_linear(const ComputationGraph& g) { return chain_order(g).has_value(); }

std::vector<int> linear_order(const ComputationGraph& g) {
  auto order = chain_order(g);
  if (!order) fail(ErrorCode::kNotLinear, "graph is not linear");
  return *order;
}

void BandwidthProfile::validate() const {
  if (points.empty()) fail(ErrorCode::kValidation, "bandwidth profile has no points");
  if (latency < 0) fail(ErrorCode::kValidation, "negative latency");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].log2_bytes < 0 || points[i].log2_bytes > 62) {
      fail(ErrorCode::kValidation, "log2_bytes out of range");
    }
    if (!(points[i].bandwidth > 0)) {
      fail(ErrorCode::kValidation, "bandwidth must be positive");
    }
    if (i > 0 && points[i].log2_bytes <= points[i - 1].log2_bytes) {
      fail(ErrorCode::kValidation, "log2_bytes must be strictly increasing");
    }
  }
}

bool BandwidthProfile::has_monotone_times() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    double prev = std::ldexp(1.0, points[i - 1].log2_bytes) / points[i - 1].bandwidth;
    double cur = std::ldexp(1.0, points[i].log2_bytes) / points[i].bandwidth;
    if (cur < prev) return false;
  }
  return true;
}

DeviceGraph::DeviceGraph(int device_count, std::vector<PartitionScheme> schemes)
    : device_count_(device_count), schemes_(std::move(schemes)) {
  validate();
}

DeviceGraph DeviceGraph::uniform(int device_count, const BandwidthProfile& profile) {
  std::vector<PartitionScheme> schemes;
  for (int g = 1; g <= device_count; ++g) {
    if (device_count % g != 0) continue;
    PartitionScheme s;
    s.id = "groups_of_" + std::to_string(g);
    s.group_sizes.assign(static_cast<std::size_t>(device_count / g), g);
    s.profile = profile;
    schemes.push_back(std::move(s));
  }
  PartitionScheme fallback;
  fallback.id = "default";
  fallback.profile = profile;
  schemes.push_back(std::move(fallback));
  return DeviceGraph(device_count, std::move(schemes));
}

const PartitionScheme& DeviceGraph::scheme_for_group(int group_size) const {
  if (group_size >= 1 && device_count_ % group_size == 0) {
    std::vector<int> exact(static_cast<std::size_t>(device_count_ / group_size), group_size);
    for (const auto& s : schemes_) {
      if (s.group_sizes == exact) return s;
    }
  }
  for (const auto& s : schemes_) {
    if (!s.group_sizes.empty() &&
        std::all_of(s.group_sizes.begin(), s.group_sizes.end(),
                    [&](int v) { return v == group_size; })) {
      return s;
    }
  }
  for (const auto& s : schemes_) {
    if (s.id == "default") return s;
  }
  fail(ErrorCode::kValidation,
       "no partition scheme for groups of " + std::to_string(group_size) + " devices");
}

DeviceGraph DeviceGraph::with_device_count(int device_count) const {
  DeviceGraph copy = *this;
  copy.device_count_ = device_count;
  copy.validate();
  return copy;
}

void DeviceGraph::validate() const {
  if (device_count_ < 1) fail(ErrorCode::kValidation, "device_count must be >= 1");
  std::set<std::string> ids;
  for (const auto& s : schemes_) {
    if (!ids.insert(s.id).second) {
      fail(ErrorCode::kValidation, "duplicate scheme id '" + s.id + "'");
    }
    for (int g : s.group_sizes) {
      if (g < 1) fail(ErrorCode::kValidation, "scheme '" + s.id + "' has a group size < 1");
    }
    s.profile.validate();
  }
}

}  // namespace ftrack
