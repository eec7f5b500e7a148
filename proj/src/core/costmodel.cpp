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

#include "ftrack/costmodel.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "ftrack/error.hpp"

namespace ftrack {

double comm_time(std::uint64_t bytes, const BandwidthProfile& profile) {
  if (bytes == 0) return 0.0;
  const auto& pts = profile.points;
  if (pts.empty()) fail(ErrorCode::kValidation, "bandwidth profile has no points");
  auto size_at = [&](std::size_t i) { return std::ldexp(1.0, pts[i].log2_bytes); };
  const double b = static_cast<double>(bytes);
  if (b > size_at(pts.size() - 1)) {
    fail(ErrorCode::kProfileOutOfRange,
         std::to_string(bytes) + " bytes exceeds the largest profiled size 2^" +
             std::to_string(pts.back().log2_bytes));
  }
  // First profiled size >= bytes.
  std::size_t hi = 0;
  while (size_at(hi) < b) ++hi;
  double bandwidth;
  if (size_at(hi) == b || hi == 0) {
    bandwidth = pts[hi].bandwidth;
  } else {
    const std::size_t lo = hi - 1;
    const double x0 = size_at(lo);
    const double x1 = size_at(hi);
    const double frac = (b - x0) / (x1 - x0);
    bandwidth = pts[lo].bandwidth + frac * (pts[hi].bandwidth - pts[lo].bandwidth);
  }
  return profile.latency + b / bandwidth;
}

SplitState canonical_state(SplitState s, int device_count) {
  if (s.map.is_unsplit()) {
    s.mesh.dims = {device_count};
    std::fill(s.map.map.begin(), s.map.map.end(), -1);
  }
  return s;
}

ReschedulePlanner::ReschedulePlanner(Shape shape, const DeviceGraph& dev, int max_rank,
                                     int dtype_bytes)
    : shape_(std::move(shape)), device_count_(dev.device_count()), dtype_bytes_(dtype_bytes) {
  const auto meshes = enumerate_meshes(device_count_, max_rank);
  for (const auto& mesh : meshes) {
    for (const auto& map : enumerate_tensor_maps(shape_, mesh)) {
      SplitState s = canonical_state({mesh, map}, device_count_);
      if (index_.emplace(s, states_.size()).second) states_.push_back(s);
    }
  }

  auto add = [&](std::size_t from, SplitState to, double seconds) {
    to = canonical_state(std::move(to), device_count_);
    auto it = index_.find(to);
    if (it == index_.end()) fail(ErrorCode::kInternal, "transition to an unknown layout");
    if (it->second != from) adj_[from].push_back({it->second, seconds});
  };
  auto collective = [&](std::uint64_t bytes, int group) {
    return comm_time(bytes, dev.scheme_for_group(group).profile);
  };

  adj_.resize(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const SplitState& s = states_[i];
    const std::size_t rank = shape_.size();
    if (s.is_replicated()) {
      // Every device holds the whole tensor, so a slice on any mesh is local.
      for (const auto& mesh : meshes) {
        for (std::size_t d = 0; d < rank; ++d) {
          for (std::size_t m = 0; m < mesh.dims.size(); ++m) {
            if (mesh.dims[m] < 2 || shape_[d] % mesh.dims[m] != 0) continue;
            SplitState t{mesh, s.map};
            t.map.map[d] = static_cast<int>(m);
            add(i, t, 0.0);
          }
        }
      }
      continue;
    }
    std::vector<bool> used(s.mesh.dims.size(), false);
    for (int m : s.map.map) {
      if (m >= 0) used[static_cast<std::size_t>(m)] = true;
    }
    const std::uint64_t local = local_bytes(s);
    for (std::size_t d = 0; d < rank; ++d) {
      const int m = s.map.map[d];
      if (m >= 0) {
        const int g = s.mesh.dims[static_cast<std::size_t>(m)];
        // All-gather: receive the other g-1 slices of the gathered result.
        SplitState gathered = s;
        gathered.map.map[d] = -1;
        add(i, gathered, collective(local * static_cast<std::uint64_t>(g - 1), g));
        // All-to-all: move the split to another unsplit dim.
        for (std::size_t d2 = 0; d2 < rank; ++d2) {
          if (s.map.map[d2] != -1 || shape_[d2] % g != 0) continue;
          SplitState moved = s;
          moved.map.map[d] = -1;
          moved.map.map[d2] = m;
          add(i, moved,
              collective(local / static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(g - 1),
                         g));
        }
      } else {
        for (std::size_t mm = 0; mm < s.mesh.dims.size(); ++mm) {
          if (used[mm] || s.mesh.dims[mm] < 2 || shape_[d] % s.mesh.dims[mm] != 0) continue;
          SplitState sliced = s;
          sliced.map.map[d] = static_cast<int>(mm);
          add(i, sliced, 0.0);
        }
      }
    }
  }
}

std::uint64_t ReschedulePlanner::local_bytes(const SplitState& s) const {
  return static_cast<std::uint64_t>(element_count(shard_shape(shape_, s.mesh, s.map))) *
         static_cast<std::uint64_t>(dtype_bytes_);
}

std::size_t ReschedulePlanner::index_of(const SplitState& s) const {
  auto it = index_.find(canonical_state(s, device_count_));
  if (it == index_.end()) fail(ErrorCode::kInvalidConfig, "layout is not valid for the tensor");
  return it->second;
}

std::vector<double> ReschedulePlanner::shortest_from(std::size_t from) const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(states_.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[from] = 0.0;
  heap.push({0.0, from});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& t : adj_[u]) {
      const double nd = d + t.seconds;
      if (nd < dist[t.to]) {
        dist[t.to] = nd;
        heap.push({nd, t.to});
      }
    }
  }
  return dist;
}

double ReschedulePlanner::time(std::size_t from, std::size_t to) const {
  if (from == to) return 0.0;
  auto it = cache_.find(from);
  if (it == cache_.end()) it = cache_.emplace(from, shortest_from(from)).first;
  const double d = it->second[to];
  if (std::isinf(d)) fail(ErrorCode::kUnreachable, "no collective sequence connects the layouts");
  return d;
}

double ReschedulePlanner::time(const SplitState& from, const SplitState& to) const {
  return time(index_of(from), index_of(to));
}

double reschedule_time(const SplitState& from, const SplitState& to, const Shape& shape,
                       const DeviceGraph& dev, int max_rank, int dtype_bytes) {
  ReschedulePlanner planner(shape, dev, max_rank, dtype_bytes);
  return planner.time(from, to);
}

CostTables::CostTables(const ComputationGraph& g, const std::map<int, int>& config_counts) {
  for (const auto& op : g.operators()) {
    auto it = config_counts.find(op.id);
    if (it == config_counts.end() || it->second < 1) {
      fail(ErrorCode::kInvalidArgument,
           "operator " + std::to_string(op.id) + " needs at least one configuration");
    }
    k_[op.id] = it->second;
    ops_[op.id].assign(static_cast<std::size_t>(it->second), {});
    op_present_[op.id].assign(static_cast<std::size_t>(it->second), false);
  }
  for (const auto& e : g.edges()) {
    EdgeTable t;
    t.src = e.src;
    t.dst = e.dst;
    t.src_k = k_.at(e.src);
    t.dst_k = k_.at(e.dst);
    t.costs.assign(static_cast<std::size_t>(t.src_k * t.dst_k), {});
    t.present.assign(t.costs.size(), false);
    edges_[e.id] = std::move(t);
  }
}

int CostTables::config_count(int op) const {
  auto it = k_.find(op);
  if (it == k_.end()) fail(ErrorCode::kMissingCost, "no costs for operator " + std::to_string(op));
  return it->second;
}

namespace {

std::string op_key(int op, int cfg) {
  return "op " + std::to_string(op) + " cfg " + std::to_string(cfg);
}

std::string edge_key(int edge, int s, int d) {
  return "edge " + std::to_string(edge) + " src_cfg " + std::to_string(s) + " dst_cfg " +
         std::to_string(d);
}

}  // namespace

const OperatorCost& CostTables::op(int op, int cfg) const {
  auto it = ops_.find(op);
  if (it == ops_.end() || cfg < 0 || cfg >= static_cast<int>(it->second.size())) {
    fail(ErrorCode::kMissingCost, "no cost for " + op_key(op, cfg));
  }
  return it->second[static_cast<std::size_t>(cfg)];
}

OperatorCost& CostTables::op(int op, int cfg) {
  return const_cast<OperatorCost&>(std::as_const(*this).op(op, cfg));
}

const EdgeCost& CostTables::edge(int edge, int s, int d) const {
  auto it = edges_.find(edge);
  if (it == edges_.end() || s < 0 || d < 0 || s >= it->second.src_k || d >= it->second.dst_k) {
    fail(ErrorCode::kMissingCost, "no cost for " + edge_key(edge, s, d));
  }
  return it->second.costs[static_cast<std::size_t>(s * it->second.dst_k + d)];
}

EdgeCost& CostTables::edge(int edge, int s, int d) {
  return const_cast<EdgeCost&>(std::as_const(*this).edge(edge, s, d));
}

void CostTables::set_op(int op_id, int cfg, const OperatorCost& cost) {
  op(op_id, cfg) = cost;
  op_present_[op_id][static_cast<std::size_t>(cfg)] = true;
}

void CostTables::set_edge(int edge_id, int s, int d, const EdgeCost& cost) {
  edge(edge_id, s, d) = cost;
  auto& t = edges_.at(edge_id);
  t.present[static_cast<std::size_t>(s * t.dst_k + d)] = true;
}

void CostTables::require_complete() const {
  for (const auto& [id, present] : op_present_) {
    for (std::size_t k = 0; k < present.size(); ++k) {
      if (!present[k]) fail(ErrorCode::kMissingCost, "missing cost for " + op_key(id, static_cast<int>(k)));
    }
  }
  for (const auto& [id, t] : edges_) {
    for (std::size_t i = 0; i < t.present.size(); ++i) {
      if (!t.present[i]) {
        fail(ErrorCode::kMissingCost,
             "missing cost for " + edge_key(id, static_cast<int>(i) / t.dst_k,
                                            static_cast<int>(i) % t.dst_k));
      }
    }
  }
}

OperatorCost synthetic_operator_cost(const Operator& op, const ParallelConfig& cfg,
                                     const DeviceGraph& dev,
                                     const SyntheticCostOptions& options) {
  OperatorCost cost;
  const auto bytes = [&](const Shape& s) {
    return static_cast<double>(element_count(s)) * options.dtype_bytes;
  };
  const std::size_t out = op.tensor_shapes.size() - 1;
  const Shape out_shard = shard_shape(op.tensor_shapes[out], cfg.mesh, cfg.tensor_maps[out]);
  cost.m_t = bytes(out_shard);
  cost.t_c = options.seconds_per_element * static_cast<double>(element_count(out_shard));

  std::vector<bool> out_used(cfg.mesh.dims.size(), false);
  for (int m : cfg.tensor_maps[out].map) {
    if (m >= 0) out_used[static_cast<std::size_t>(m)] = true;
  }
  for (std::size_t p = 0; p < out; ++p) {
    const Shape shard = shard_shape(op.tensor_shapes[p], cfg.mesh, cfg.tensor_maps[p]);
    const double shard_bytes = bytes(shard);
    cost.m_p += shard_bytes;
    if (!options.communication) continue;
    std::vector<bool> used = out_used;
    for (int m : cfg.tensor_maps[p].map) {
      if (m >= 0) used[static_cast<std::size_t>(m)] = false;
    }
    int group = 1;
    for (std::size_t m = 0; m < used.size(); ++m) {
      if (used[m]) group *= cfg.mesh.dims[m];
    }
    if (group < 2) continue;
    const double volume = 2.0 * shard_bytes * (group - 1) / group;
    cost.t_s += comm_time(static_cast<std::uint64_t>(std::ceil(volume)),
                          dev.scheme_for_group(group).profile);
  }
  return cost;
}

SplitState edge_layout(const Shape& edge_shape, const ParallelConfig& cfg, int device_count) {
  SplitState s;
  s.mesh = cfg.mesh;
  s.map.map.assign(edge_shape.size(), -1);
  const auto& out = cfg.tensor_maps.back().map;
  for (std::size_t d = 0; d < edge_shape.size() && d < out.size(); ++d) {
    const int m = out[d];
    if (m >= 0 && edge_shape[d] % cfg.mesh.dims[static_cast<std::size_t>(m)] == 0) s.map.map[d] = m;
  }
  return canonical_state(std::move(s), device_count);
}

namespace {

void fill_edges(const ComputationGraph& g, const ConfigSpace& space, const DeviceGraph& dev,
                const SyntheticCostOptions& options, CostTables& tables) {
  std::map<Shape, ReschedulePlanner> planners;
  for (const auto& e : g.edges()) {
    const auto& src_cfgs = space.configs(e.src);
    const auto& dst_cfgs = space.configs(e.dst);
    if (!options.communication) {
      for (std::size_t s = 0; s < src_cfgs.size(); ++s) {
        for (std::size_t d = 0; d < dst_cfgs.size(); ++d) {
          tables.set_edge(e.id, static_cast<int>(s), static_cast<int>(d), {});
        }
      }
      continue;
    }
    auto it = planners.find(e.tensor_shape);
    if (it == planners.end()) {
      it = planners
               .emplace(e.tensor_shape,
                        ReschedulePlanner(e.tensor_shape, dev, options.max_rank, options.dtype_bytes))
               .first;
    }
    const ReschedulePlanner& planner = it->second;
    std::vector<std::size_t> from, to;
    for (const auto& c : src_cfgs) from.push_back(planner.index_of(edge_layout(e.tensor_shape, c, dev.device_count())));
    for (const auto& c : dst_cfgs) to.push_back(planner.index_of(edge_layout(e.tensor_shape, c, dev.device_count())));
    for (std::size_t s = 0; s < from.size(); ++s) {
      for (std::size_t d = 0; d < to.size(); ++d) {
        tables.set_edge(e.id, static_cast<int>(s), static_cast<int>(d), {planner.time(from[s], to[d])});
      }
    }
  }
}

std::map<int, int> counts_of(const ComputationGraph& g, const ConfigSpace& space) {
  std::map<int, int> counts;
  for (const auto& op : g.operators()) counts[op.id] = static_cast<int>(space.size(op.id));
  return counts;
}

}  // namespace

CostTables build_cost_tables(const ComputationGraph& g, const ConfigSpace& space,
                             const DeviceGraph& dev, const SyntheticCostOptions& options) {
  CostTables tables(g, counts_of(g, space));
  for (const auto& op : g.operators()) {
    const auto& cfgs = space.configs(op.id);
    for (std::size_t k = 0; k < cfgs.size(); ++k) {
      tables.set_op(op.id, static_cast<int>(k), synthetic_operator_cost(op, cfgs[k], dev, options));
    }
  }
  fill_edges(g, space, dev, options, tables);
  return tables;
}

CostTables build_cost_tables(const ComputationGraph& g, const ConfigSpace& space,
                             const DeviceGraph& dev, const CostTables& op_costs,
                             const SyntheticCostOptions& options) {
  CostTables tables(g, counts_of(g, space));
  for (const auto& op : g.operators()) {
    for (int k = 0; k < static_cast<int>(space.size(op.id)); ++k) {
      tables.set_op(op.id, k, op_costs.op(op.id, k));
    }
  }
  fill_edges(g, space, dev, options, tables);
  return tables;
}

TotalCost total_cost(std::span<const int> strategy, const ComputationGraph& g,
                     const CostTables& tables) {
  if (strategy.size() != g.operator_count()) {
    fail(ErrorCode::kInvalidArgument, "strategy must assign one configuration per operator");
  }
  TotalCost total;
  const auto& ops = g.operators();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& c = tables.op(ops[i].id, strategy[i]);
    total.memory += c.memory();
    total.time += c.time();
    total.communication += c.t_s;
  }
  for (const auto& e : g.edges()) {
    const double tx = tables.edge(e.id, strategy[g.op_position(e.src)], strategy[g.op_position(e.dst)]).t_x;
    total.time += tx;
    total.communication += tx;
  }
  return total;
}

}  // namespace ftrack
