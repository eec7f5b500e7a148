#include <set>

#include "doctest.h"
#include "ftrack/config.hpp"
#include "ftrack/error.hpp"

using namespace ftrack;

namespace {

std::vector<std::vector<int>> dims_of(const std::vector<DeviceMesh>& ms) {
  std::vector<std::vector<int>> out;
  for (const auto& m : ms) out.push_back(m.dims);
  return out;
}

Operator op_with(std::vector<Shape> shapes) {
  Operator op;
  op.id = 0;
  op.tensor_shapes = std::move(shapes);
  op.is_input = true;
  return op;
}

}  // namespace

TEST_CASE("mesh enumeration") {
  using V = std::vector<std::vector<int>>;
  CHECK(dims_of(enumerate_meshes(4, 2)) == V{{4}, {2, 2}});
  CHECK(dims_of(enumerate_meshes(1, 2)) == V{{1}});
  CHECK(dims_of(enumerate_meshes(8, 2)) == V{{8}, {2, 4}, {4, 2}});
  CHECK(dims_of(enumerate_meshes(8, 3)) == V{{8}, {2, 4}, {4, 2}, {2, 2, 2}});
  CHECK(dims_of(enumerate_meshes(7, 2)) == V{{7}});
  CHECK(dims_of(enumerate_meshes(12, 1)) == V{{12}});
}

TEST_CASE("shard shapes") {
  CHECK(shard_shape({200, 100}, DeviceMesh{{2, 2}}, TensorMap{{0, 1}}) == Shape{100, 50});
  CHECK(shard_shape({200, 100}, DeviceMesh{{2, 2}}, TensorMap{{-1, -1}}) == Shape{200, 100});
  CHECK(shard_shape({8, 8}, DeviceMesh{{4}}, TensorMap{{-1, 0}}) == Shape{8, 2});
  CHECK_THROWS_AS(shard_shape({7}, DeviceMesh{{4}}, TensorMap{{0}}), Error);
  try {
    shard_shape({7}, DeviceMesh{{4}}, TensorMap{{0}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidConfig);
  }
  CHECK_FALSE(is_valid_map({8, 8}, DeviceMesh{{2, 2}}, TensorMap{{0, 0}}));
  CHECK_FALSE(is_valid_map({8}, DeviceMesh{{2, 2}}, TensorMap{{2}}));
  CHECK_FALSE(is_valid_map({8, 8}, DeviceMesh{{2, 2}}, TensorMap{{0}}));
}

TEST_CASE("config enumeration examples") {
  const auto only_unsplit = enumerate_configs(op_with({{7}}), 4);
  REQUIRE(only_unsplit.size() == 1);
  CHECK(only_unsplit[0].is_full_replication());

  const auto rank1 = enumerate_configs(op_with({{4}}), 4, ConfigOptions{1});
  REQUIRE(rank1.size() == 2);
  CHECK(rank1[0].mesh.dims == std::vector<int>{4});
  CHECK(rank1[0].tensor_maps[0].map == std::vector<int>{-1});
  CHECK(rank1[1].tensor_maps[0].map == std::vector<int>{0});
  CHECK(rank1[1].replicated_mesh_dims.empty());
  CHECK(rank1[0].replicated_mesh_dims == std::vector<int>{0});

  const auto single = enumerate_configs(op_with({{4, 4}}), 1);
  CHECK(single.size() == 1);
}

TEST_CASE("property: enumerated configs are valid, unique, deterministic") {
  const std::vector<std::vector<Shape>> cases = {
      {{8, 8}}, {{200, 100}}, {{6, 4}, {6, 4}}, {{7, 3}}, {{16}, {16, 8}}, {{12, 2, 4}}};
  for (int devices : {1, 2, 4, 6, 8}) {
    for (const auto& shapes : cases) {
      const Operator op = op_with(shapes);
      const auto cfgs = enumerate_configs(op, devices);
      CHECK(cfgs == enumerate_configs(op, devices));
      std::set<ParallelConfig> seen(cfgs.begin(), cfgs.end());
      CHECK(seen.size() == cfgs.size());
      int full = 0;
      for (const auto& c : cfgs) {
        CHECK(c.mesh.device_count() == devices);
        if (c.is_full_replication()) ++full;
        for (std::size_t t = 0; t < shapes.size(); ++t) {
          CHECK(is_valid_map(shapes[t], c.mesh, c.tensor_maps[t]));
          // Shards times copies cover the tensor exactly.
          const Shape shard = shard_shape(shapes[t], c.mesh, c.tensor_maps[t]);
          CHECK(element_count(shard) * devices ==
                replication_factor(c.mesh, c.tensor_maps[t]) * element_count(shapes[t]));
        }
      }
      CHECK(full == 1);
      CHECK(cfgs.front().is_full_replication());
    }
  }
}

TEST_CASE("config space over a graph") {
  ComputationGraph g;
  g.add_operator(op_with({{8, 8}}));
  Operator b;
  b.id = 3;
  b.tensor_shapes = {{5}};
  g.add_operator(b);
  g.add_edge(Edge{0, 0, 3, {5}});
  const auto space = ConfigSpace::enumerate(g, 4);
  CHECK(space.device_count() == 4);
  CHECK(space.contains(3));
  CHECK(space.size(3) == 1);
  CHECK(space.size(0) == enumerate_configs(g.op(0), 4).size());
}
