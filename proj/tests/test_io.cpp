#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ftrack/error.hpp"
#include "ftrack/fixtures.hpp"
#include "ftrack/io.hpp"
#include "ftrack/solver.hpp"
#include "json.hpp"

using namespace ftrack;

namespace {

const char* kGraph = R"({
  "operators": [
    {"id": 0, "name": "embed", "tensor_shapes": [[16, 8], [32, 8]], "flags": ["is_input"]},
    {"id": 1, "name": "proj", "tensor_shapes": [[8, 8], [32, 8]], "flags": ["is_output"]}
  ],
  "edges": [{"id": 0, "src": 0, "dst": 1, "tensor_shape": [32, 8]}]
})";

const char* kDevices = R"({
  "device_count": 4,
  "schemes": [
    {"id": "default", "group_sizes": [4], "latency_s": 1e-6,
     "profile": [{"log2_bytes": 0, "bandwidth_bytes_per_s": 1e9},
                 {"log2_bytes": 20, "bandwidth_bytes_per_s": 2e9}]}
  ]
})";

std::pair<ErrorCode, std::string> failure(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  return {ErrorCode::kInternal, ""};
}

}  // namespace

TEST_CASE("graph and device files parse") {
  const auto g = parse_graph_json(kGraph);
  CHECK(g.operator_count() == 2);
  CHECK(g.op(0).name == "embed");
  CHECK(g.op(0).is_input);
  CHECK(g.op(1).is_output);
  CHECK(g.edge(0).tensor_shape == Shape{32, 8});
  CHECK(parse_graph_json(graph_to_json(g)).operators().size() == 2);
  CHECK(graph_to_json(parse_graph_json(graph_to_json(g))) == graph_to_json(g));

  const auto dev = parse_devices_json(kDevices);
  CHECK(dev.device_count() == 4);
  CHECK(dev.schemes()[0].profile.latency == 1e-6);
  CHECK(dev.schemes()[0].profile.points[1].log2_bytes == 20);
  CHECK(devices_to_json(parse_devices_json(devices_to_json(dev))) == devices_to_json(dev));
}

TEST_CASE("parse errors name the field") {
  auto [c1, m1] = failure([] { parse_graph_json("{not json"); });
  CHECK(c1 == ErrorCode::kParse);
  auto [c2, m2] = failure([] { parse_graph_json(R"({"operators": [{"id": 0}], "edges": []})"); });
  CHECK(c2 == ErrorCode::kParse);
  CHECK(m2.find("operators[0].tensor_shapes") != std::string::npos);
  auto [c3, m3] = failure([] {
    parse_graph_json(R"({"operators": [{"id": 0, "tensor_shapes": [[0]], "flags": ["is_input"]}], "edges": []})");
  });
  CHECK(c3 == ErrorCode::kValidation);
  CHECK(m3.find("operators[0].tensor_shapes[0][0]") != std::string::npos);
  auto [c4, m4] = failure([] {
    parse_graph_json(R"({"operators": [{"id": 0, "tensor_shapes": [[2]], "flags": ["bogus"]}], "edges": []})");
  });
  CHECK(c4 == ErrorCode::kValidation);
  CHECK(m4.find("bogus") != std::string::npos);
  auto [c5, m5] = failure([] {
    parse_graph_json(R"({"operators": [{"id": 0, "tensor_shapes": [[2]], "flags": ["is_input"]},
                                       {"id": 1, "tensor_shapes": [[2]]}],
                         "edges": [{"id": 0, "src": 0, "dst": 1, "tensor_shape": [2]},
                                   {"id": 1, "src": 1, "dst": 0, "tensor_shape": [2]}]})");
  });
  CHECK(c5 == ErrorCode::kCycleDetected);
  auto [c6, m6] = failure([] {
    parse_devices_json(R"({"device_count": 2, "schemes": [{"id": "a", "group_sizes": [2],
                           "profile": [{"log2_bytes": 3, "bandwidth_bytes_per_s": -1}]}]})");
  });
  CHECK(c6 == ErrorCode::kValidation);
  CHECK(m6.find("schemes[0].profile") != std::string::npos);
  auto [c7, m7] = failure([] { parse_devices_json(R"({"schemes": []})"); });
  CHECK(c7 == ErrorCode::kParse);
  CHECK(m7.find("device_count") != std::string::npos);
}

TEST_CASE("cost files") {
  const auto g = parse_graph_json(kGraph);
  const char* costs = R"({
    "op_costs": [{"op": 0, "cfg": 0, "m_p": 1, "m_t": 2, "t_c": 3, "t_s": 4},
                 {"op": 0, "cfg": 1, "m_p": 2, "m_t": 1, "t_c": 1, "t_s": 1},
                 {"op": 1, "cfg": 0, "m_p": 0, "m_t": 0, "t_c": 1, "t_s": 0}],
    "edge_costs": [{"edge": 0, "src_cfg": 0, "dst_cfg": 0, "t_x": 0.5},
                   {"edge": 0, "src_cfg": 1, "dst_cfg": 0, "t_x": 0.25}]
  })";
  const auto t = parse_costs_json(costs, g);
  CHECK(t.config_count(0) == 2);
  CHECK(t.config_count(1) == 1);
  CHECK(t.op(0, 0).time() == 7);
  CHECK(t.edge(0, 1, 0).t_x == 0.25);
  CHECK(costs_to_json(g, parse_costs_json(costs_to_json(g, t), g)) == costs_to_json(g, t));

  auto [c1, m1] = failure([&] {
    parse_costs_json(R"({"op_costs": [{"op": 0, "cfg": 0, "m_p": 1, "m_t": 2, "t_c": 3, "t_s": 4},
                                      {"op": 1, "cfg": 0, "m_p": 0, "m_t": 0, "t_c": 1, "t_s": 0}],
                         "edge_costs": []})", g);
  });
  CHECK(c1 == ErrorCode::kMissingCost);
  auto [c2, m2] = failure([&] {
    parse_costs_json(R"({"op_costs": [{"op": 0, "cfg": 0, "m_p": 1, "m_t": 2, "t_c": 3}], "edge_costs": []})", g);
  });
  CHECK(c2 == ErrorCode::kParse);
  CHECK(m2.find("op_costs[0].t_s") != std::string::npos);

  // With an enumerated space the file must cover every configuration.
  const auto space = ConfigSpace::enumerate(g, 4);
  CHECK(failure([&] { parse_costs_json(costs, g, &space); }).first == ErrorCode::kMissingCost);
}

TEST_CASE("result emission round-trips") {
  const Fixture f = gen_fixture(FixtureKind::kResidual, 2, 2, 3);
  const auto r = ft(f.graph, f.tables);
  const std::string text = result_to_json(r, f.graph);
  CHECK_NOTHROW(validate_result_json(text));
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["frontier"].size() == r.points.size());
  CHECK(doc["stats"]["heuristic_count"] == 0);
  CHECK(doc["stats"]["eliminations"]["branch"] == 2);
  CHECK(doc["frontier"][0]["strategy"].size() == f.graph.operator_count());

  const std::string csv = result_to_csv(r);
  CHECK(csv.rfind("memory_bytes,time_s,strategy_id\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  double pm = -1, pt = 1e300;
  int rows = 0;
  while (std::getline(lines, line)) {
    double m = 0, t = 0;
    int id = -1;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%d", &m, &t, &id) == 3);
    CHECK(m > pm);
    CHECK(t < pt);
    CHECK(id == rows);
    pm = m;
    pt = t;
    ++rows;
  }
  CHECK(rows == static_cast<int>(r.points.size()));

  const auto trace = nlohmann::json::parse(trace_to_json(r.log));
  REQUIRE(trace.size() == r.log.size());
  for (const auto& rec : trace) {
    CHECK(rec.contains("kind"));
    CHECK(rec.contains("eliminated"));
    CHECK(rec.contains("new_entity"));
    CHECK(rec.contains("records_count"));
  }
}

TEST_CASE("configs appear in results when the space is known") {
  const auto g = parse_graph_json(kGraph);
  const auto dev = parse_devices_json(kDevices);
  const auto space = ConfigSpace::enumerate(g, 4);
  const auto t = build_cost_tables(g, space, dev);
  const auto r = ft(g, t);
  const auto doc = nlohmann::json::parse(result_to_json(r, g, &space, 4));
  CHECK(doc["device_count"] == 4);
  const auto& s = doc["frontier"][0]["strategy"][0];
  CHECK(s.contains("mesh"));
  CHECK(s["tensor_maps"].size() == 2);
  CHECK_NOTHROW(validate_result_json(doc.dump()));
}

TEST_CASE("validator rejects malformed results") {
  CHECK_THROWS_AS(validate_result_json("[]"), Error);
  CHECK_THROWS_AS(validate_result_json("nope"), Error);
  const std::string unordered = R"({"frontier": [
      {"memory_bytes": 2, "time_s": 1, "strategy": []},
      {"memory_bytes": 1, "time_s": 0, "strategy": []}],
    "stats": {"eliminations": {"node": 0, "edge": 0, "branch": 0, "heuristic": 0},
              "ldp_steps": 0, "n": 1, "heuristic_count": 0}})";
  const auto [code, msg] = failure([&] { validate_result_json(unordered); });
  CHECK(code == ErrorCode::kValidation);
  CHECK(msg.find("frontier[1]") != std::string::npos);
}

TEST_CASE("profile emission") {
  const std::vector<ProfileRow> rows{{1, std::nullopt}, {2, 0.5}};
  CHECK(profile_to_csv(rows) == "device_count,min_time_s\n1,infeasible\n2,0.5\n");
  const auto doc = nlohmann::json::parse(profile_to_json(rows));
  CHECK(doc[0]["min_time_s"].is_null());
  CHECK(doc[1]["min_time_s"] == 0.5);
}

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(format_double(3.5) == "3.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1536 / 1.5e9) == format_double(1536 / 1.5e9));
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("fixtures") {
  const auto a = gen_fixture(FixtureKind::kChain, 3, 2, 7);
  const auto b = gen_fixture(FixtureKind::kChain, 3, 2, 7);
  CHECK(graph_to_json(a.graph) == graph_to_json(b.graph));
  CHECK(costs_to_json(a.graph, a.tables) == costs_to_json(b.graph, b.tables));
  CHECK(costs_to_json(a.graph, a.tables) !=
        costs_to_json(a.graph, gen_fixture(FixtureKind::kChain, 3, 2, 8).tables));
  CHECK(a.graph.operator_count() == 3);

  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = gen_fixture(FixtureKind::kResidual, 3, 2, s);
    CHECK(r.graph.operator_count() == 10);
    CHECK(ft(r.graph, r.tables).stats.eliminations.heuristic == 0);
    const auto si = gen_fixture(FixtureKind::kSharedInput, 3 + static_cast<int>(s), 2, s);
    CHECK(ft(si.graph, si.tables).stats.eliminations.heuristic == 1);
  }
  for (const auto& op : a.graph.operators()) {
    for (int k = 0; k < 2; ++k) {
      const auto& c = a.tables.op(op.id, k);
      for (double v : {c.m_p, c.m_t, c.t_c, c.t_s}) {
        CHECK(v >= 0);
        CHECK(v <= 100);
        CHECK(v == static_cast<double>(static_cast<int>(v)));
      }
    }
  }
  CHECK_THROWS_AS(gen_fixture(FixtureKind::kChain, 0, 2, 1), Error);
  CHECK_THROWS_AS(gen_fixture(FixtureKind::kChain, 2, 0, 1), Error);
  CHECK_THROWS_AS(gen_fixture(FixtureKind::kSharedInput, 2, 2, 1), Error);
  CHECK(parse_fixture_kind("shared-input") == FixtureKind::kSharedInput);
  CHECK_THROWS_AS(parse_fixture_kind("ring"), Error);
}
