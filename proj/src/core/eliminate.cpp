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

#include "ftrack/eliminate.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "combine.hpp"
#include "ftrack/error.hpp"
#include "ftrack/parallel.hpp"

namespace ftrack {

using detail::Candidate;

const char* elim_kind_name(ElimKind kind) {
  switch (kind) {
    case ElimKind::kNode: return "node";
    case ElimKind::kEdge: return "edge";
    case ElimKind::kBranch: return "branch";
    case ElimKind::kHeuristic: return "heuristic";
  }
  return "unknown";
}

ElimState ElimState::initialize(const ComputationGraph& g, const CostTables& tables,
                                std::optional<std::uint64_t> seed) {
  ElimState st;
  st.working = g;
  for (const auto& op : g.operators()) {
    const int k = tables.config_count(op.id);
    auto& fs = st.op_frontiers[op.id];
    fs.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      const auto& cost = tables.op(op.id, c);
      fs.push_back(Frontier::singleton({cost.memory(), cost.time(), 0, make_choice({op.id, c})}));
    }
  }
  for (const auto& e : g.edges()) {
    EdgeFrontiers ef(tables.config_count(e.src), tables.config_count(e.dst));
    for (int s = 0; s < ef.src_k; ++s) {
      for (int d = 0; d < ef.dst_k; ++d) {
        ef.at(s, d) = Frontier::singleton({0.0, tables.edge(e.id, s, d).t_x, 0, nullptr});
      }
    }
    st.edge_frontiers.emplace(e.id, std::move(ef));
  }
  st.next_edge_id = g.max_edge_id() + 1;
  st.first_op = first_operator(g, seed);
  st.refresh_marking();
  return st;
}

int ElimState::config_count(int op) const {
  return static_cast<int>(op_frontiers.at(op).size());
}

void ElimState::refresh_marking() {
  if (first_op && working.has_operator(*first_op)) {
    backbone = mark_backbone_from(working, *first_op);
  } else {
    first_op = first_operator(working);
    backbone = first_op ? mark_backbone_from(working, *first_op) : LinearBackbone{};
  }
}

ElimCounts ElimState::counts() const {
  ElimCounts c;
  for (const auto& r : log) {
    switch (r.kind) {
      case ElimKind::kNode: ++c.node; break;
      case ElimKind::kEdge: ++c.edge; break;
      case ElimKind::kBranch: ++c.branch; break;
      case ElimKind::kHeuristic: ++c.heuristic; break;
    }
  }
  return c;
}

namespace {

[[noreturn]] void precondition(const std::string& what) {
  fail(ErrorCode::kPreconditionViolated, what);
}

std::size_t tuple_count(const std::vector<Frontier>& fs) {
  std::size_t n = 0;
  for (const auto& f : fs) n += f.size();
  return n;
}

void require_op(const ElimState& st, int op) {
  if (!st.working.has_operator(op)) precondition("operator " + std::to_string(op) + " is not in the working graph");
}

// Frontier of the edge pair with `op` at `op_cfg` and the other end at
// `other_cfg`, whichever direction the edge runs.
const Frontier& edge_cell(const ElimState& st, int edge_id, int op, int op_cfg, int other_cfg) {
  const Edge& e = st.working.edge(edge_id);
  const auto& ef = st.edge_frontiers.at(edge_id);
  return e.src == op ? ef.at(op_cfg, other_cfg) : ef.at(other_cfg, op_cfg);
}

}  // namespace

void node_eliminate(ElimState& st, int op, int threads) {
  require_op(st, op);
  if (st.backbone.contains(op)) precondition("operator " + std::to_string(op) + " is marked");
  const auto in = st.working.in_edges(op);
  const auto out = st.working.out_edges(op);
  if (in.size() != 1 || out.size() != 1) {
    precondition("node elimination needs exactly one input and one output edge at operator " +
                 std::to_string(op));
  }
  const Edge e_in = st.working.edge(in[0]);
  const Edge e_out = st.working.edge(out[0]);
  const int h = e_in.src;
  const int j = e_out.dst;
  const int kh = st.config_count(h);
  const int ki = st.config_count(op);
  const int kj = st.config_count(j);
  const auto& f_in = st.edge_frontiers.at(e_in.id);
  const auto& f_op = st.op_frontiers.at(op);
  const auto& f_out = st.edge_frontiers.at(e_out.id);

  EdgeFrontiers merged(kh, kj);
  parallel_for(merged.cells.size(), threads, [&](std::size_t cell) {
    const int w = static_cast<int>(cell) / kj;
    const int p = static_cast<int>(cell) % kj;
    std::vector<Candidate> cand;
    for (int k = 0; k < ki; ++k) {
      detail::append_product(cand, &f_in.at(w, k), &f_op[static_cast<std::size_t>(k)], &f_out.at(k, p));
    }
    merged.cells[cell] = detail::materialize(cand);
  });

  ElimRecord rec;
  rec.kind = ElimKind::kNode;
  rec.eliminated_ops = {op};
  rec.eliminated_edges = {e_in.id, e_out.id};
  rec.new_entity = st.next_edge_id;
  rec.records_count = tuple_count(merged.cells);

  st.working.remove_operator(op);
  st.op_frontiers.erase(op);
  st.edge_frontiers.erase(e_in.id);
  st.edge_frontiers.erase(e_out.id);
  st.working.add_edge({st.next_edge_id, h, j, e_out.tensor_shape});
  st.edge_frontiers.emplace(st.next_edge_id, std::move(merged));
  ++st.next_edge_id;
  st.log.push_back(std::move(rec));
}

void edge_eliminate(ElimState& st, int src, int dst, int threads) {
  require_op(st, src);
  require_op(st, dst);
  std::vector<int> parallel;
  for (int id : st.working.out_edges(src)) {
    if (st.working.edge(id).dst == dst) parallel.push_back(id);
  }
  if (parallel.size() < 2) {
    precondition("edge elimination needs at least two edges " + std::to_string(src) + " -> " +
                 std::to_string(dst));
  }
  const int ks = st.config_count(src);
  const int kd = st.config_count(dst);
  EdgeFrontiers merged(ks, kd);
  parallel_for(merged.cells.size(), threads, [&](std::size_t cell) {
    const int s = static_cast<int>(cell) / kd;
    const int d = static_cast<int>(cell) % kd;
    Frontier acc = st.edge_frontiers.at(parallel[0]).at(s, d);
    for (std::size_t v = 1; v < parallel.size(); ++v) {
      std::vector<Candidate> cand;
      detail::append_product(cand, &acc, &st.edge_frontiers.at(parallel[v]).at(s, d), nullptr);
      acc = detail::materialize(cand);
    }
    merged.cells[cell] = std::move(acc);
  });

  ElimRecord rec;
  rec.kind = ElimKind::kEdge;
  rec.eliminated_edges = parallel;
  rec.new_entity = st.next_edge_id;
  rec.records_count = tuple_count(merged.cells);

  const Shape shape = st.working.edge(parallel[0]).tensor_shape;
  for (int id : parallel) {
    st.working.remove_edge(id);
    st.edge_frontiers.erase(id);
  }
  st.working.add_edge({st.next_edge_id, src, dst, shape});
  st.edge_frontiers.emplace(st.next_edge_id, std::move(merged));
  ++st.next_edge_id;
  st.log.push_back(std::move(rec));
}

void branch_eliminate(ElimState& st, int merged, int receiver, const ElimOptions& options) {
  require_op(st, merged);
  require_op(st, receiver);
  if (st.backbone.contains(merged)) precondition("operator " + std::to_string(merged) + " is marked");
  const auto incident = st.working.incident_edges(merged);
  if (incident.size() != 1) {
    precondition("branch elimination needs operator " + std::to_string(merged) +
                 " to have exactly one remaining edge");
  }
  const Edge link = st.working.edge(incident[0]);
  if (link.src != receiver && link.dst != receiver) {
    precondition("operator " + std::to_string(merged) + " is not connected to " +
                 std::to_string(receiver));
  }
  const int kh = st.config_count(receiver);
  const int ki = st.config_count(merged);
  const std::size_t composite = static_cast<std::size_t>(kh) * static_cast<std::size_t>(ki);
  if (composite > options.composite_cap) {
    fail(ErrorCode::kSpaceExplosion,
         "merging operator " + std::to_string(merged) + " into " + std::to_string(receiver) +
             " needs " + std::to_string(composite) + " composite configurations (cap " +
             std::to_string(options.composite_cap) + ")");
  }

  const auto& f_h = st.op_frontiers.at(receiver);
  const auto& f_i = st.op_frontiers.at(merged);
  std::vector<Frontier> fused(composite);
  parallel_for(composite, options.threads, [&](std::size_t c) {
    const int p = static_cast<int>(c) / ki;
    const int k = static_cast<int>(c) % ki;
    std::vector<Candidate> cand;
    detail::append_product(cand, &f_h[static_cast<std::size_t>(p)], &f_i[static_cast<std::size_t>(k)],
                           &edge_cell(st, link.id, receiver, p, k));
    fused[c] = detail::materialize(cand);
  });

  // Re-index the receiver's other edges onto the composite space.
  for (int id : st.working.incident_edges(receiver)) {
    if (id == link.id) continue;
    const Edge& e = st.working.edge(id);
    const auto& old = st.edge_frontiers.at(id);
    EdgeFrontiers remapped = e.src == receiver ? EdgeFrontiers(static_cast<int>(composite), old.dst_k)
                                               : EdgeFrontiers(old.src_k, static_cast<int>(composite));
    for (int s = 0; s < remapped.src_k; ++s) {
      for (int d = 0; d < remapped.dst_k; ++d) {
        remapped.at(s, d) = e.src == receiver ? old.at(s / ki, d) : old.at(s, d / ki);
      }
    }
    st.edge_frontiers[id] = std::move(remapped);
  }

  ElimRecord rec;
  rec.kind = ElimKind::kBranch;
  rec.eliminated_ops = {merged};
  rec.eliminated_edges = {link.id};
  rec.new_entity = receiver;
  rec.records_count = tuple_count(fused);

  auto& pairs = st.composite_spaces[receiver];
  pairs.clear();
  for (std::size_t c = 0; c < composite; ++c) {
    pairs.emplace_back(static_cast<int>(c) / ki, static_cast<int>(c) % ki);
  }
  st.op_frontiers[receiver] = std::move(fused);
  st.working.remove_operator(merged);
  st.op_frontiers.erase(merged);
  st.edge_frontiers.erase(link.id);
  st.log.push_back(std::move(rec));
}

namespace {

int choose_configuration(const std::vector<Frontier>& fs, const ElimOptions& options) {
  double max_m = 0.0;
  double max_t = 0.0;
  for (const auto& f : fs) {
    for (const auto& t : f) {
      max_m = std::max(max_m, t.memory);
      max_t = std::max(max_t, t.time);
    }
  }
  auto score = [&](const StrategyTuple& t) -> std::pair<double, double> {
    if (options.policy == HeuristicPolicy::kMinMemory) return {t.memory, t.time};
    const double nm = max_m > 0 ? t.memory / max_m : 0.0;
    const double nt = max_t > 0 ? t.time / max_t : 0.0;
    return {options.alpha * nm + (1.0 - options.alpha) * nt, 0.0};
  };
  int best = 0;
  std::pair<double, double> best_score{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < fs.size(); ++k) {
    for (const auto& t : fs[k]) {
      const auto s = score(t);
      if (s < best_score) {
        best_score = s;
        best = static_cast<int>(k);
      }
    }
  }
  return best;
}

}  // namespace

int heuristic_eliminate(ElimState& st, int op, const ElimOptions& options) {
  require_op(st, op);
  if (st.backbone.contains(op)) precondition("operator " + std::to_string(op) + " is marked");
  const auto incident = st.working.incident_edges(op);
  if (incident.empty()) precondition("operator " + std::to_string(op) + " has no edges to fold into");

  const int k = choose_configuration(st.op_frontiers.at(op), options);
  const Frontier own = st.op_frontiers.at(op)[static_cast<std::size_t>(k)];

  // The operator's own cost goes to the topologically first downstream
  // operator, or the first upstream one for a sink.
  const auto order = topological_order(st.working);
  auto rank = [&](int id) { return std::find(order.begin(), order.end(), id) - order.begin(); };
  const auto succ = st.working.successors(op);
  const auto pred = st.working.predecessors(op);
  int owner = -1;
  for (int n : succ) {
    if (owner < 0 || rank(n) < rank(owner)) owner = n;
  }
  if (owner < 0) {
    for (int n : pred) {
      if (owner < 0 || rank(n) < rank(owner)) owner = n;
    }
  }

  ElimRecord rec;
  rec.kind = ElimKind::kHeuristic;
  rec.eliminated_ops = {op};
  rec.eliminated_edges = incident;
  rec.fixed_choice = Assignment{op, k};

  bool own_folded = false;
  for (int id : incident) {
    const Edge& e = st.working.edge(id);
    const int other = e.src == op ? e.dst : e.src;
    auto& target = st.op_frontiers.at(other);
    const bool with_own = !own_folded && other == owner;
    own_folded = own_folded || with_own;
    std::vector<Frontier> updated(target.size());
    parallel_for(target.size(), options.threads, [&](std::size_t p) {
      std::vector<Candidate> cand;
      detail::append_product(cand, &target[p], &edge_cell(st, id, op, k, static_cast<int>(p)),
                             with_own ? &own : nullptr);
      updated[p] = detail::materialize(cand);
    });
    rec.records_count += tuple_count(updated);
    target = std::move(updated);
  }
  rec.new_entity = owner;

  st.working.remove_operator(op);
  st.op_frontiers.erase(op);
  for (int id : incident) st.edge_frontiers.erase(id);
  st.log.push_back(std::move(rec));
  return k;
}

namespace {

bool try_node(ElimState& st, const std::vector<int>& order, const ElimOptions& options) {
  for (int op : order) {
    if (st.backbone.contains(op)) continue;
    if (st.working.in_edges(op).size() == 1 && st.working.out_edges(op).size() == 1) {
      node_eliminate(st, op, options.threads);
      return true;
    }
  }
  return false;
}

bool try_edge(ElimState& st, const std::vector<int>& order, const ElimOptions& options) {
  for (int op : order) {
    std::map<int, int> per_dst;
    for (int id : st.working.out_edges(op)) ++per_dst[st.working.edge(id).dst];
    for (int dst : order) {
      auto it = per_dst.find(dst);
      if (it != per_dst.end() && it->second >= 2) {
        edge_eliminate(st, op, dst, options.threads);
        return true;
      }
    }
  }
  return false;
}

bool try_branch(ElimState& st, const std::vector<int>& order, const ElimOptions& options) {
  int best = -1;
  int best_receiver = -1;
  std::size_t best_size = 0;
  for (int op : order) {
    if (st.backbone.contains(op)) continue;
    const auto incident = st.working.incident_edges(op);
    if (incident.size() != 1) continue;
    const Edge& e = st.working.edge(incident[0]);
    const int receiver = e.src == op ? e.dst : e.src;
    const std::size_t size = static_cast<std::size_t>(st.config_count(op)) *
                             static_cast<std::size_t>(st.config_count(receiver));
    if (best < 0 || size < best_size) {
      best = op;
      best_receiver = receiver;
      best_size = size;
    }
  }
  if (best < 0) return false;
  branch_eliminate(st, best, best_receiver, options);
  return true;
}

bool try_heuristic(ElimState& st, const std::vector<int>& order, const ElimOptions& options) {
  int best = -1;
  std::size_t best_out = 0;
  for (int op : order) {
    if (st.backbone.contains(op) || st.working.incident_edges(op).empty()) continue;
    const std::size_t out = st.working.out_edges(op).size();
    if (best < 0 || out > best_out) {
      best = op;
      best_out = out;
    }
  }
  if (best < 0) return false;
  heuristic_eliminate(st, best, options);
  return true;
}

}  // namespace

ElimCounts run_eliminations(ElimState& st, const ElimOptions& options) {
  while (true) {
    st.refresh_marking();
    const auto order = topological_order(st.working);
    if (try_node(st, order, options)) continue;
    if (try_edge(st, order, options)) continue;
    if (try_branch(st, order, options)) continue;
    if (try_heuristic(st, order, options)) continue;
    break;
  }
  st.refresh_marking();
  if (!is_linear(st.working)) {
    fail(ErrorCode::kNotLinearizable, "eliminations could not reduce the graph to a chain");
  }
  return st.counts();
}

}  // namespace ftrack
