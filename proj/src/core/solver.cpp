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

#include "ftrack/solver.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "combine.hpp"
#include "ftrack/error.hpp"
#include "ftrack/parallel.hpp"

namespace ftrack {

using detail::Candidate;

namespace {

// Single frontier table for all edges src -> dst of a chain; `scratch` holds
// the merged table when there are parallel edges.
const EdgeFrontiers& link_frontiers(const ElimState& st, int src, int dst, int threads,
                                    EdgeFrontiers& scratch) {
  std::vector<int> edges;
  for (int id : st.working.out_edges(src)) {
    if (st.working.edge(id).dst == dst) edges.push_back(id);
  }
  if (edges.empty()) fail(ErrorCode::kNotLinear, "consecutive operators are not joined");
  if (edges.size() == 1) return st.edge_frontiers.at(edges[0]);
  EdgeFrontiers merged(st.config_count(src), st.config_count(dst));
  parallel_for(merged.cells.size(), threads, [&](std::size_t cell) {
    Frontier acc = st.edge_frontiers.at(edges[0]).cells[cell];
    for (std::size_t v = 1; v < edges.size(); ++v) {
      std::vector<Candidate> cand;
      detail::append_product(cand, &acc, &st.edge_frontiers.at(edges[v]).cells[cell], nullptr);
      acc = detail::materialize(cand);
    }
    merged.cells[cell] = std::move(acc);
  });
  scratch = std::move(merged);
  return scratch;
}

Frontier reduce_union(const std::vector<Frontier>& fs) {
  std::vector<Candidate> cand;
  for (const auto& f : fs) detail::append_product(cand, &f, nullptr, nullptr);
  return detail::materialize(cand);
}

}  // namespace

LdpResult ldp(const ElimState& st, const LdpOptions& options) {
  LdpResult out;
  out.order = linear_order(st.working);
  if (out.order.empty()) {
    out.frontier = Frontier::singleton({});
    return out;
  }
  std::vector<Frontier> prev = st.op_frontiers.at(out.order[0]);
  if (options.keep_cumulative) out.cumulative.push_back(prev);
  for (std::size_t i = 1; i < out.order.size(); ++i) {
    const int a = out.order[i - 1];
    const int b = out.order[i];
    EdgeFrontiers scratch;
    const EdgeFrontiers& link = link_frontiers(st, a, b, options.threads, scratch);
    const auto& f_op = st.op_frontiers.at(b);
    const int ka = static_cast<int>(prev.size());
    std::vector<Frontier> next(f_op.size());
    parallel_for(f_op.size(), options.threads, [&](std::size_t p) {
      std::vector<Candidate> cand;
      for (int k = 0; k < ka; ++k) {
        detail::append_product(cand, &link.at(k, static_cast<int>(p)),
                               &prev[static_cast<std::size_t>(k)], &f_op[p]);
      }
      next[p] = detail::materialize(cand, options.reduce_intermediate);
    });
    prev = std::move(next);
    if (options.keep_cumulative) out.cumulative.push_back(prev);
  }
  out.frontier = reduce_union(prev);
  return out;
}

Frontier ft_elimination(ElimState st, int threads) {
  st.backbone = {};
  auto order = linear_order(st.working);
  while (order.size() > 2) {
    node_eliminate(st, order[1], threads);
    order = linear_order(st.working);
  }
  if (order.empty()) return Frontier::singleton({});
  if (order.size() == 1) return reduce_union(st.op_frontiers.at(order[0]));
  EdgeFrontiers scratch;
  const EdgeFrontiers& link = link_frontiers(st, order[0], order[1], threads, scratch);
  const auto& f1 = st.op_frontiers.at(order[0]);
  const auto& f2 = st.op_frontiers.at(order[1]);
  std::vector<Candidate> cand;
  for (int k = 0; k < static_cast<int>(f1.size()); ++k) {
    for (int p = 0; p < static_cast<int>(f2.size()); ++p) {
      detail::append_product(cand, &f1[static_cast<std::size_t>(k)], &link.at(k, p),
                             &f2[static_cast<std::size_t>(p)]);
    }
  }
  return detail::materialize(cand);
}

std::vector<int> unroll(const StrategyTuple& tuple, const ComputationGraph& g) {
  std::vector<int> strategy(g.operator_count(), -1);
  for (const auto& a : choices_of(tuple.trace)) {
    if (!g.has_operator(a.op)) {
      fail(ErrorCode::kBrokenProvenance, "trace names unknown operator " + std::to_string(a.op));
    }
    int& slot = strategy[g.op_position(a.op)];
    if (slot != -1) {
      fail(ErrorCode::kBrokenProvenance, "operator " + std::to_string(a.op) + " assigned twice");
    }
    slot = a.cfg;
  }
  for (std::size_t i = 0; i < strategy.size(); ++i) {
    if (strategy[i] < 0) {
      fail(ErrorCode::kBrokenProvenance,
           "operator " + std::to_string(g.operators()[i].id) + " has no configuration");
    }
  }
  return strategy;
}

FrontierResult ft(const ComputationGraph& g, const CostTables& tables, const SolveOptions& options) {
  ElimOptions elim = options.elim;
  elim.threads = options.threads;
  ElimState st = ElimState::initialize(g, tables, elim.seed);
  FrontierResult result;
  result.stats.eliminations = run_eliminations(st, elim);
  result.stats.backbone_length = st.working.operator_count();
  LdpOptions lo;
  lo.threads = options.threads;
  const LdpResult solved = ldp(st, lo);
  result.stats.ldp_steps =
      solved.order.empty() ? 0 : static_cast<int>(solved.order.size()) - 1;
  result.log = st.log;
  result.points.reserve(solved.frontier.size());
  for (const auto& t : solved.frontier) {
    result.points.push_back({t.memory, t.time, unroll(t, g)});
  }
  return result;
}

FrontierResult brute_force(const ComputationGraph& g, const CostTables& tables,
                           std::uint64_t limit) {
  const auto& ops = g.operators();
  const std::size_t n = ops.size();
  std::vector<int> radix(n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    radix[i] = tables.config_count(ops[i].id);
    if (total > limit / static_cast<std::uint64_t>(radix[i])) {
      fail(ErrorCode::kTooLarge, "more than " + std::to_string(limit) + " strategies");
    }
    total *= static_cast<std::uint64_t>(radix[i]);
  }

  // Dense copies of the tables indexed by operator position.
  std::vector<std::vector<std::pair<double, double>>> op_cost(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < radix[i]; ++k) {
      const auto& c = tables.op(ops[i].id, k);
      op_cost[i].emplace_back(c.memory(), c.time());
    }
  }
  struct Link {
    std::size_t src, dst;
    int dst_k;
    std::vector<double> tx;
  };
  std::vector<Link> links;
  for (const auto& e : g.edges()) {
    Link l{g.op_position(e.src), g.op_position(e.dst), 0, {}};
    l.dst_k = radix[l.dst];
    for (int s = 0; s < radix[l.src]; ++s) {
      for (int d = 0; d < l.dst_k; ++d) l.tx.push_back(tables.edge(e.id, s, d).t_x);
    }
    links.push_back(std::move(l));
  }

  struct Point {
    double memory;
    double time;
    std::uint64_t id;
  };
  std::vector<Point> all;
  all.reserve(static_cast<std::size_t>(total));
  std::vector<int> digits(n, 0);
  for (std::uint64_t id = 0; id < total; ++id) {
    double m = 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m += op_cost[i][static_cast<std::size_t>(digits[i])].first;
      t += op_cost[i][static_cast<std::size_t>(digits[i])].second;
    }
    for (const auto& l : links) {
      t += l.tx[static_cast<std::size_t>(digits[l.src] * l.dst_k + digits[l.dst])];
    }
    all.push_back({m, t, id});
    // Last operator varies fastest.
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
    }
  }
  reduce_in_place(all);

  FrontierResult result;
  for (const auto& p : all) {
    FrontierPoint fp{p.memory, p.time, std::vector<int>(n)};
    std::uint64_t rest = p.id;
    for (std::size_t i = n; i-- > 0;) {
      fp.strategy[i] = static_cast<int>(rest % static_cast<std::uint64_t>(radix[i]));
      rest /= static_cast<std::uint64_t>(radix[i]);
    }
    result.points.push_back(std::move(fp));
  }
  return result;
}

std::optional<std::size_t> mini_time(const FrontierResult& result, double memory_limit) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    if (p.memory > memory_limit) continue;
    if (!best || p.time < result.points[*best].time) best = i;
  }
  return best;
}

ParallelismExplorer::ParallelismExplorer(ComputationGraph g, DeviceFamily family,
                                         ParallelismOptions options)
    : graph_(std::move(g)), family_(std::move(family)), options_(std::move(options)) {}

ParallelismExplorer::Entry& ParallelismExplorer::entry(int device_count) {
  auto it = cache_.find(device_count);
  if (it != cache_.end()) return it->second;
  const DeviceGraph dev = family_(device_count);
  Entry e;
  e.space = ConfigSpace::enumerate(graph_, device_count, options_.config);
  SyntheticCostOptions costs = options_.costs;
  costs.max_rank = options_.config.max_rank;
  const CostTables tables = build_cost_tables(graph_, e.space, dev, costs);
  e.result = ft(graph_, tables, options_.solve);
  return cache_.emplace(device_count, std::move(e)).first->second;
}

const FrontierResult& ParallelismExplorer::result_for(int device_count) {
  return entry(device_count).result;
}

const ConfigSpace& ParallelismExplorer::space_for(int device_count) {
  return entry(device_count).space;
}

ParallelismChoice mini_parallelism(ParallelismExplorer& explorer, double per_device_memory,
                                   const std::vector<int>& counts) {
  if (!std::is_sorted(counts.begin(), counts.end())) {
    fail(ErrorCode::kInvalidArgument, "device counts must be sorted ascending");
  }
  for (int count : counts) {
    const auto& r = explorer.result_for(count);
    // points[0] is the minimum-memory strategy.
    if (r.points.empty() || r.points.front().memory > per_device_memory) continue;
    return {count, *mini_time(r, per_device_memory)};
  }
  fail(ErrorCode::kNoFeasibleCount, "no candidate device count fits the per-device memory");
}

std::vector<ProfileRow> profile(ParallelismExplorer& explorer, double per_device_memory,
                                const std::vector<int>& counts) {
  std::vector<ProfileRow> rows;
  for (int count : counts) {
    const auto& r = explorer.result_for(count);
    ProfileRow row{count, std::nullopt};
    if (auto i = mini_time(r, per_device_memory)) row.min_time = r.points[*i].time;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ftrack
