#include <algorithm>
#include <random>

#include "doctest.h"
#include "ftrack/error.hpp"
#include "ftrack/graph.hpp"
#include "test_util.hpp"

using namespace ftrack;
using ftrack::testing::make_graph;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

ComputationGraph random_dag(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j) {
    std::uniform_int_distribution<int> pick(0, j - 1);
    edges.emplace_back(pick(rng), j);
    for (int i = 0; i < j; ++i) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return make_graph(n, edges);
}

}  // namespace

TEST_CASE("topological order of small graphs") {
  CHECK(topological_order(make_graph(3, {{0, 1}, {1, 2}})) == std::vector<int>{0, 1, 2});
  CHECK(topological_order(make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})) ==
        std::vector<int>{0, 1, 2, 3});
  CHECK(topological_order(make_graph(1, {})) == std::vector<int>{0});
  CHECK(topological_order(make_graph(3, {{2, 0}, {1, 0}})) == std::vector<int>{1, 2, 0});
}

TEST_CASE("cycles and bad graphs are rejected") {
  ComputationGraph g = make_graph(3, {{0, 1}, {1, 2}});
  g.add_edge(Edge{10, 2, 1, {8, 8}});
  CHECK(code_of([&] { topological_order(g); }) == ErrorCode::kCycleDetected);
  CHECK(code_of([&] { g.validate(); }) == ErrorCode::kCycleDetected);

  ComputationGraph dup = make_graph(2, {{0, 1}});
  Operator again;
  again.id = 1;
  again.tensor_shapes = {{2}};
  CHECK(code_of([&] { dup.add_operator(again); }) != ErrorCode::kInternal);

  ComputationGraph self = make_graph(1, {});
  CHECK(code_of([&] { self.add_edge(Edge{0, 0, 0, {1}}); self.validate(); }) != ErrorCode::kInternal);

  ComputationGraph unreachable = make_graph(2, {{0, 1}});
  Operator lone;
  lone.id = 5;
  lone.tensor_shapes = {{3}};
  unreachable.add_operator(lone);
  CHECK(code_of([&] { unreachable.validate(); }) == ErrorCode::kValidation);
}

TEST_CASE("backbone marking") {
  CHECK(mark_backbone(make_graph(3, {{0, 1}, {1, 2}})).marked == std::vector<int>{0, 1, 2});
  CHECK(mark_backbone(make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})).marked == std::vector<int>{0});
  CHECK(mark_backbone(make_graph(4, {{0, 1}, {1, 2}, {1, 3}})).marked == std::vector<int>{0, 1});
  // Parallel edges still name one downstream operator.
  CHECK(mark_backbone(make_graph(2, {{0, 1}, {0, 1}})).marked == std::vector<int>{0, 1});
  CHECK(mark_backbone(ComputationGraph{}).marked.empty());
}

TEST_CASE("seeded first operator picks among sources") {
  const auto g = make_graph(5, {{0, 4}, {1, 4}, {2, 4}, {3, 4}});
  CHECK(first_operator(g) == 0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = first_operator(g, s);
    REQUIRE(f.has_value());
    CHECK(*f >= 0);
    CHECK(*f <= 3);
    CHECK(first_operator(g, s) == f);
  }
}

TEST_CASE("linearity") {
  CHECK(is_linear(make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})));
  CHECK_FALSE(is_linear(make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})));
  CHECK(is_linear(make_graph(2, {{0, 1}, {0, 1}, {0, 1}})));
  CHECK(is_linear(make_graph(1, {})));
  CHECK_FALSE(is_linear(make_graph(3, {{0, 1}, {1, 2}, {0, 2}})));
  CHECK(linear_order(make_graph(3, {{2, 1}, {1, 0}})) == std::vector<int>{2, 1, 0});
  CHECK(code_of([] { linear_order(make_graph(3, {{0, 1}, {0, 2}})); }) == ErrorCode::kNotLinear);
}

TEST_CASE("property: orders respect edges, backbones are paths") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const auto g = random_dag(rng, n, 0.25);
    const auto order = topological_order(g);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    CHECK(sorted == ids);
    std::vector<std::size_t> pos(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = i;
    for (const auto& e : g.edges()) {
      CHECK(pos[static_cast<std::size_t>(e.src)] < pos[static_cast<std::size_t>(e.dst)]);
    }

    const auto bb = mark_backbone(g);
    REQUIRE(!bb.marked.empty());
    CHECK(bb.marked[0] == 0);
    for (std::size_t i = 1; i < bb.marked.size(); ++i) {
      CHECK(g.successors(bb.marked[i - 1]) == std::vector<int>{bb.marked[i]});
    }
    CHECK(g.successors(bb.marked.back()).size() != 1);
    // Prefix closure: restarting from any marked operator yields the tail.
    for (std::size_t i = 0; i < bb.marked.size(); ++i) {
      const auto tail = mark_backbone_from(g, bb.marked[i]).marked;
      CHECK(std::equal(tail.begin(), tail.end(), bb.marked.begin() + static_cast<std::ptrdiff_t>(i)));
    }
    if (is_linear(g)) CHECK(bb.marked.size() == g.operator_count());
  }
}

TEST_CASE("removal keeps indices consistent") {
  auto g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  g.remove_operator(1);
  CHECK(g.operator_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.out_edges(0) == std::vector<int>{3});
  CHECK(g.op(2).id == 2);
  g.remove_edge(2);
  CHECK(g.in_edges(3) == std::vector<int>{3});
}

TEST_CASE("bandwidth profiles and partition schemes") {
  BandwidthProfile p;
  p.points = {{10, 1e9}, {11, 2e9}};
  CHECK_NOTHROW(p.validate());
  CHECK(p.has_monotone_times());
  p.points = {{10, 1e9}, {11, 4e9}};
  CHECK_FALSE(p.has_monotone_times());
  p.points = {{11, 1e9}, {10, 1e9}};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::kValidation);
  p.points = {{10, 0.0}};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::kValidation);

  const auto prof = ftrack::testing::flat_profile();
  PartitionScheme whole{"whole", {4}, prof};
  PartitionScheme pairs{"pairs", {2, 2}, prof};
  pairs.profile.latency = 1.0;
  PartitionScheme fallback{"default", {1, 1, 1, 1}, prof};
  fallback.profile.latency = 2.0;
  const DeviceGraph dev(4, {whole, pairs, fallback});
  CHECK(dev.scheme_for_group(4).id == "whole");
  CHECK(dev.scheme_for_group(2).id == "pairs");
  CHECK(dev.scheme_for_group(3).id == "default");
  CHECK(dev.with_device_count(8).device_count() == 8);
  CHECK(code_of([&] { DeviceGraph(0, {}); }) == ErrorCode::kValidation);

  const auto u = DeviceGraph::uniform(8, prof);
  CHECK(u.scheme_for_group(2).group_sizes == std::vector<int>{2, 2, 2, 2});
  CHECK(u.scheme_for_group(8).group_sizes == std::vector<int>{8});
}
