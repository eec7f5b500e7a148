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

#include "ftrack/fixtures.hpp"

#include <algorithm>
#include <random>

#include "ftrack/error.hpp"

namespace ftrack {

namespace {

const Shape kShape{8, 8};

struct Builder {
  std::vector<Operator> ops;
  std::vector<Edge> edges;

  void op(int id, const std::string& name, bool input) {
    Operator o;
    o.id = id;
    o.name = name;
    o.tensor_shapes = {kShape};
    o.is_input = input;
    ops.push_back(std::move(o));
  }
  void edge(int src, int dst) {
    edges.push_back(Edge{static_cast<int>(edges.size()), src, dst, kShape});
  }

  ComputationGraph build() {
    ComputationGraph g;
    for (auto& o : ops) {
      o.is_output = std::none_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.src == o.id; });
      g.add_operator(o);
    }
    for (const auto& e : edges) g.add_edge(e);
    g.validate();
    return g;
  }
};

}  // namespace

FixtureKind parse_fixture_kind(const std::string& name) {
  if (name == "chain") return FixtureKind::kChain;
  if (name == "residual") return FixtureKind::kResidual;
  if (name == "shared-input") return FixtureKind::kSharedInput;
  fail(ErrorCode::kInvalidArgument, "unknown fixture kind '" + name + "'");
}

const char* fixture_kind_name(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::kChain: return "chain";
    case FixtureKind::kResidual: return "residual";
    case FixtureKind::kSharedInput: return "shared-input";
  }
  return "?";
}

void randomize_costs(const ComputationGraph& g, CostTables& tables, std::uint64_t seed,
                     int max_cost) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, max_cost);
  auto draw = [&] { return static_cast<double>(dist(rng)); };
  for (const auto& op : g.operators()) {
    for (int k = 0; k < tables.config_count(op.id); ++k) {
      OperatorCost c;
      c.m_p = draw();
      c.m_t = draw();
      c.t_c = draw();
      c.t_s = draw();
      tables.set_op(op.id, k, c);
    }
  }
  for (const auto& e : g.edges()) {
    for (int s = 0; s < tables.config_count(e.src); ++s) {
      for (int d = 0; d < tables.config_count(e.dst); ++d) {
        tables.set_edge(e.id, s, d, EdgeCost{draw()});
      }
    }
  }
}

Fixture gen_fixture(FixtureKind kind, int n, int k, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "fixture needs n >= 1");
  if (k < 1) fail(ErrorCode::kInvalidArgument, "fixture needs K >= 1");
  Builder b;
  switch (kind) {
    case FixtureKind::kChain:
      for (int i = 0; i < n; ++i) {
        b.op(i, "x" + std::to_string(i), i == 0);
        if (i > 0) b.edge(i - 1, i);
      }
      break;
    case FixtureKind::kResidual: {
      b.op(0, "x0", true);
      int prev = 0;
      for (int blk = 0; blk < n; ++blk) {
        const int body = 1 + 3 * blk, bias = body + 1, add = body + 2;
        b.op(body, "body" + std::to_string(blk), false);
        b.op(bias, "bias" + std::to_string(blk), true);
        b.op(add, "add" + std::to_string(blk), false);
        b.edge(prev, body);
        b.edge(body, add);
        b.edge(prev, add);
        b.edge(bias, add);
        prev = add;
      }
      break;
    }
    case FixtureKind::kSharedInput: {
      if (n < 3) fail(ErrorCode::kInvalidArgument, "shared-input fixture needs n >= 3");
      for (int i = 0; i < n; ++i) {
        b.op(i, "x" + std::to_string(i), i == 0);
        if (i > 0) b.edge(i - 1, i);
      }
      b.op(n, "mask", true);
      std::vector<int> targets;
      for (int i = 1; i < n; i += 2) targets.push_back(i);
      if (targets.size() < 2 && targets.back() != n - 1) targets.push_back(n - 1);
      for (int t : targets) b.edge(n, t);
      break;
    }
  }
  Fixture f;
  f.graph = b.build();
  const ComputationGraph& g = f.graph;
  std::map<int, int> counts;
  for (const auto& op : g.operators()) counts[op.id] = k;
  f.tables = CostTables(g, counts);
  randomize_costs(g, f.tables, seed);
  return f;
}

}  // namespace ftrack
