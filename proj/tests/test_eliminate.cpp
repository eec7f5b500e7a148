#include <random>

#include "doctest.h"
#include "ftrack/eliminate.hpp"
#include "ftrack/error.hpp"
#include "ftrack/fixtures.hpp"
#include "ftrack/solver.hpp"
#include "test_util.hpp"

using namespace ftrack;
using ftrack::testing::costs_of;
using ftrack::testing::make_graph;
using ftrack::testing::uniform_tables;

namespace {

using Costs = std::vector<std::pair<double, double>>;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

ElimState unmarked(const ComputationGraph& g, const CostTables& t) {
  ElimState st = ElimState::initialize(g, t);
  st.backbone = {};
  return st;
}

std::size_t size_of(const ElimState& st) {
  return st.working.operator_count() + st.working.edge_count();
}

}  // namespace

TEST_CASE("node elimination with singleton frontiers sums the path") {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  CostTables t(g, {{0, 1}, {1, 1}, {2, 1}});
  t.set_op(0, 0, {1, 0, 1, 0});
  t.set_op(1, 0, {2, 1, 3, 1});
  t.set_op(2, 0, {1, 0, 1, 0});
  t.set_edge(0, 0, 0, {0.5});
  t.set_edge(1, 0, 0, {0.25});
  auto st = unmarked(g, t);
  node_eliminate(st, 1);
  CHECK(st.working.operator_count() == 2);
  REQUIRE(st.working.edge_count() == 1);
  const int e = st.log.back().new_entity;
  CHECK(st.working.edge(e).src == 0);
  CHECK(st.working.edge(e).dst == 2);
  const auto& cell = st.edge_frontiers.at(e).at(0, 0);
  CHECK(costs_of(cell) == Costs{{3, 4.75}});
  CHECK(choices_of(cell[0].trace) == std::vector<Assignment>{{1, 0}});
}

TEST_CASE("node elimination keeps both staircase paths") {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  CostTables t(g, {{0, 1}, {1, 2}, {2, 1}});
  t.set_op(0, 0, {});
  t.set_op(1, 0, {1, 0, 4, 0});
  t.set_op(1, 1, {2, 0, 1, 0});
  t.set_op(2, 0, {});
  for (int k = 0; k < 2; ++k) {
    t.set_edge(0, 0, k, {});
    t.set_edge(1, k, 0, {});
  }
  auto st = unmarked(g, t);
  node_eliminate(st, 1);
  const auto& cell = st.edge_frontiers.at(st.log.back().new_entity).at(0, 0);
  CHECK(costs_of(cell) == Costs{{1, 4}, {2, 1}});
  CHECK(choices_of(cell[0].trace) == std::vector<Assignment>{{1, 0}});
  CHECK(choices_of(cell[1].trace) == std::vector<Assignment>{{1, 1}});
  CHECK(st.log.back().records_count == 2);
}

TEST_CASE("node elimination on a 3-op chain matches brute force") {
  const Fixture f = gen_fixture(FixtureKind::kChain, 3, 2, 17);
  auto st = unmarked(f.graph, f.tables);
  node_eliminate(st, 1);
  const Frontier got = ldp(st).frontier;
  CHECK(costs_of(got) == costs_of(brute_force(f.graph, f.tables).points));
}

TEST_CASE("node elimination preconditions") {
  const auto g = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto st = ElimState::initialize(g, uniform_tables(g, 1));
  CHECK(code_of([&] { node_eliminate(st, 0); }) == ErrorCode::kPreconditionViolated);
  CHECK(code_of([&] { node_eliminate(st, 9); }) == ErrorCode::kPreconditionViolated);
  const auto chain = make_graph(3, {{0, 1}, {1, 2}});
  auto marked = ElimState::initialize(chain, uniform_tables(chain, 1));
  CHECK(code_of([&] { node_eliminate(marked, 1); }) == ErrorCode::kPreconditionViolated);
}

TEST_CASE("edge elimination") {
  const auto g = make_graph(2, {{0, 1}, {0, 1}});
  CostTables t(g, {{0, 1}, {1, 1}});
  t.set_op(0, 0, {});
  t.set_op(1, 0, {});
  t.set_edge(0, 0, 0, {0.1});
  t.set_edge(1, 0, 0, {0.2});
  auto st = ElimState::initialize(g, t);
  edge_eliminate(st, 0, 1);
  REQUIRE(st.working.edge_count() == 1);
  const auto& cell = st.edge_frontiers.at(st.log.back().new_entity).at(0, 0);
  CHECK(costs_of(cell) == Costs{{0, 0.1 + 0.2}});

  const auto three = make_graph(2, {{0, 1}, {0, 1}, {0, 1}});
  auto zero = ElimState::initialize(three, uniform_tables(three, 2));
  edge_eliminate(zero, 0, 1);
  for (const auto& c : zero.edge_frontiers.at(zero.log.back().new_entity).cells) {
    CHECK(costs_of(c) == Costs{{0, 0}});
  }
  CHECK(code_of([&] { edge_eliminate(zero, 0, 1); }) == ErrorCode::kPreconditionViolated);
}

TEST_CASE("edge elimination of two-tuple frontiers") {
  const auto g = make_graph(2, {{0, 1}, {0, 1}});
  auto st = ElimState::initialize(g, uniform_tables(g, 1));
  st.edge_frontiers.at(0).at(0, 0) =
      reduce({ftrack::testing::tuple(1, 5, 0), ftrack::testing::tuple(3, 2, 1)});
  st.edge_frontiers.at(1).at(0, 0) =
      reduce({ftrack::testing::tuple(0, 4, 0), ftrack::testing::tuple(2, 1, 1)});
  edge_eliminate(st, 0, 1);
  // Sums: (1,9) (3,6) (3,6) (5,3).
  CHECK(costs_of(st.edge_frontiers.at(st.log.back().new_entity).at(0, 0)) ==
        Costs{{1, 9}, {3, 6}, {5, 3}});
}

TEST_CASE("branch elimination") {
  // 0 -> 2 <- 1 with 1 as the branch source.
  const auto g = make_graph(3, {{0, 2}, {1, 2}});
  CostTables t(g, {{0, 1}, {1, 2}, {2, 2}});
  t.set_op(0, 0, {});
  t.set_op(1, 0, {1, 0, 0, 0});
  t.set_op(1, 1, {2, 0, 0, 0});
  t.set_op(2, 0, {10, 0, 1, 0});
  t.set_op(2, 1, {20, 0, 2, 0});
  for (int p = 0; p < 2; ++p) {
    t.set_edge(0, 0, p, {});
    for (int k = 0; k < 2; ++k) t.set_edge(1, k, p, {static_cast<double>(10 * k + p)});
  }
  auto st = ElimState::initialize(g, t);
  branch_eliminate(st, 1, 2);
  CHECK_FALSE(st.working.has_operator(1));
  REQUIRE(st.config_count(2) == 4);
  const auto& fs = st.op_frontiers.at(2);
  // Composite c = p * K_merged + k.
  CHECK(costs_of(fs[0]) == Costs{{11, 1}});
  CHECK(costs_of(fs[1]) == Costs{{12, 11}});
  CHECK(costs_of(fs[2]) == Costs{{21, 3}});
  CHECK(costs_of(fs[3]) == Costs{{22, 13}});
  // The receiver's other edge is re-indexed to the composite space.
  CHECK(st.edge_frontiers.at(0).dst_k == 4);
  CHECK(is_linear(st.working));

  const auto one = make_graph(3, {{0, 2}, {1, 2}});
  CostTables t1(one, {{0, 2}, {1, 1}, {2, 3}});
  for (int k = 0; k < 3; ++k) t1.set_op(2, k, {static_cast<double>(k), 0, 1, 0});
  for (int k = 0; k < 2; ++k) t1.set_op(0, k, {});
  t1.set_op(1, 0, {5, 0, 1, 0});
  for (auto s : {0, 1}) for (int d = 0; d < 3; ++d) t1.set_edge(0, s, d, {});
  for (int d = 0; d < 3; ++d) t1.set_edge(1, 0, d, {});
  auto s1 = ElimState::initialize(one, t1);
  branch_eliminate(s1, 1, 2);
  REQUIRE(s1.config_count(2) == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(costs_of(s1.op_frontiers.at(2)[static_cast<std::size_t>(k)]) == Costs{{5.0 + k, 2}});
  }
}

TEST_CASE("branch elimination guards its composite space") {
  const auto g = make_graph(3, {{0, 2}, {1, 2}});
  auto st = ElimState::initialize(g, uniform_tables(g, 70));
  ElimOptions opts;
  CHECK(code_of([&] { branch_eliminate(st, 1, 2, opts); }) == ErrorCode::kSpaceExplosion);
  opts.composite_cap = 70 * 70;
  CHECK_NOTHROW(branch_eliminate(st, 1, 2, opts));
  const auto chain = make_graph(3, {{0, 1}, {1, 2}});
  auto marked = ElimState::initialize(chain, uniform_tables(chain, 1));
  CHECK(code_of([&] { branch_eliminate(marked, 0, 1); }) == ErrorCode::kPreconditionViolated);
}

TEST_CASE("diamond becomes linear after exact eliminations") {
  const auto g = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto st = ElimState::initialize(g, uniform_tables(g, 2));
  const auto counts = run_eliminations(st);
  CHECK(counts.heuristic == 0);
  CHECK(is_linear(st.working));
  CHECK(counts.node == 2);
  CHECK(counts.edge == 1);
}

TEST_CASE("heuristic elimination") {
  SUBCASE("min-memory picks the smallest memory config") {
    const auto g = make_graph(3, {{0, 1}, {0, 2}});
    CostTables t(g, {{0, 3}, {1, 1}, {2, 1}});
    t.set_op(0, 0, {5, 0, 1, 0});
    t.set_op(0, 1, {3, 0, 9, 0});
    t.set_op(0, 2, {7, 0, 0, 0});
    t.set_op(1, 0, {});
    t.set_op(2, 0, {});
    for (int k = 0; k < 3; ++k) {
      t.set_edge(0, k, 0, {1});
      t.set_edge(1, k, 0, {2});
    }
    auto st = ElimState::initialize(g, t);
    st.backbone = {};
    CHECK(heuristic_eliminate(st, 0) == 1);
    CHECK(st.log.back().fixed_choice == Assignment{0, 1});
    CHECK(st.working.edge_count() == 0);
    // Own cost lands once, on the first downstream operator.
    CHECK(costs_of(st.op_frontiers.at(1)[0]) == Costs{{3, 10}});
    CHECK(costs_of(st.op_frontiers.at(2)[0]) == Costs{{0, 2}});
  }
  SUBCASE("weighted policy trades memory for time") {
    const auto g = make_graph(2, {{0, 1}});
    CostTables t(g, {{0, 2}, {1, 1}});
    t.set_op(0, 0, {4, 0, 100, 0});
    t.set_op(0, 1, {5, 0, 1, 0});
    t.set_op(1, 0, {});
    t.set_edge(0, 0, 0, {});
    t.set_edge(0, 1, 0, {});
    ElimOptions opts;
    opts.policy = HeuristicPolicy::kWeighted;
    opts.alpha = 0.5;
    auto st = ElimState::initialize(g, t);
    st.backbone = {};
    CHECK(heuristic_eliminate(st, 0, opts) == 1);
    opts.alpha = 1.0;
    auto st2 = ElimState::initialize(g, t);
    st2.backbone = {};
    CHECK(heuristic_eliminate(st2, 0, opts) == 0);
  }
  SUBCASE("K = 1 loses nothing") {
    const auto g = make_graph(3, {{0, 1}, {2, 1}});
    const Fixture f{g, [&] {
                      CostTables t(g, {{0, 2}, {1, 2}, {2, 1}});
                      randomize_costs(g, t, 8);
                      return t;
                    }()};
    auto st = ElimState::initialize(f.graph, f.tables);
    heuristic_eliminate(st, 2);
    CHECK(costs_of(ldp(st).frontier) == costs_of(brute_force(f.graph, f.tables).points));
  }
}

TEST_CASE("shared mask feeding three blocks needs one heuristic step") {
  const Fixture f = gen_fixture(FixtureKind::kSharedInput, 6, 2, 4);
  // The mask feeds operators 1, 3 and 5.
  CHECK(f.graph.out_edges(6).size() == 3);
  auto st = ElimState::initialize(f.graph, f.tables);
  const auto counts = run_eliminations(st);
  CHECK(counts.heuristic == 1);
  CHECK(is_linear(st.working));
}

TEST_CASE("driver examples") {
  const auto chain = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  auto st = ElimState::initialize(chain, uniform_tables(chain, 2));
  CHECK(run_eliminations(st).total() == 0);

  const Fixture res = gen_fixture(FixtureKind::kResidual, 2, 2, 1);
  auto rs = ElimState::initialize(res.graph, res.tables);
  const auto c = run_eliminations(rs);
  CHECK(c.heuristic == 0);
  CHECK(c.branch == 2);
  CHECK(is_linear(rs.working));

  const auto split = make_graph(4, {{0, 1}, {2, 3}});
  auto ds = ElimState::initialize(split, uniform_tables(split, 1));
  CHECK(code_of([&] { run_eliminations(ds); }) == ErrorCode::kNotLinearizable);
}

TEST_CASE("property: every elimination shrinks the graph and keeps it valid") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto kind = trial % 3 == 0 ? FixtureKind::kChain
                      : trial % 3 == 1 ? FixtureKind::kResidual
                                       : FixtureKind::kSharedInput;
    const int n = 3 + static_cast<int>(rng() % 4);
    const Fixture f = gen_fixture(kind, n, 1 + static_cast<int>(rng() % 3), rng());
    auto st = ElimState::initialize(f.graph, f.tables);
    const std::size_t before = size_of(st);
    REQUIRE_NOTHROW(run_eliminations(st));
    CHECK(size_of(st) + st.log.size() <= before);
    // Each record removes more entities than it adds.
    for (const auto& r : st.log) {
      const std::size_t removed = r.eliminated_ops.size() + r.eliminated_edges.size();
      const std::size_t added = (r.kind == ElimKind::kNode || r.kind == ElimKind::kEdge) ? 1 : 0;
      CHECK(removed > added);
    }
    for (const auto& [op, fs] : st.op_frontiers) {
      for (const auto& fr : fs) CHECK(fr.is_staircase());
    }
    for (const auto& [id, ef] : st.edge_frontiers) {
      CHECK(ef.cells.size() == static_cast<std::size_t>(st.config_count(st.working.edge(id).src) *
                                                        st.config_count(st.working.edge(id).dst)));
    }
  }
}
