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

#ifndef FTRACK_CONFIG_HPP_
#define FTRACK_CONFIG_HPP_

#include <compare>
#include <map>
#include <vector>

#include "ftrack/graph.hpp"

namespace ftrack {

// Logical arrangement of the devices, e.g. [4] or [2, 2].
struct DeviceMesh {
  std::vector<int> dims;

  int device_count() const;
  auto operator<=>(const DeviceMesh&) const = default;
};

// One entry per tensor dimension: the mesh dimension it is split over, or -1.
struct TensorMap {
  std::vector<int> map;

  bool is_unsplit() const;
  auto operator<=>(const TensorMap&) const = default;
};

struct ParallelConfig {
  DeviceMesh mesh;
  std::vector<TensorMap> tensor_maps;  // one per operator tensor
  std::vector<int> replicated_mesh_dims;  // mesh dims used by no tensor

  bool is_full_replication() const;
  auto operator<=>(const ParallelConfig&) const = default;
};

struct ConfigOptions {
  int max_rank = 2;
};

// Ordered factorizations of `device_count` into at most `max_rank` factors,
// each >= 2; [device_count] itself always comes first. Sorted by rank then
// lexicographically.
std::vector<DeviceMesh> enumerate_meshes(int device_count, int max_rank);

// Every valid tensor map of `shape` on `mesh`: mesh dims used at most once,
// split dims divisible by the mesh dim. Unsplit map first.
std::vector<TensorMap> enumerate_tensor_maps(const Shape& shape, const DeviceMesh& mesh);

bool is_valid_map(const Shape& shape, const DeviceMesh& mesh, const TensorMap& map);

// All valid configurations of `op` in canonical order. The full-replication
// configuration is listed once, on mesh [device_count].
std::vector<ParallelConfig> enumerate_configs(const Operator& op, int device_count,
                                              const ConfigOptions& options = {});

// Per-device slice of `shape`. Throws Error(kInvalidConfig).
Shape shard_shape(const Shape& shape, const DeviceMesh& mesh, const TensorMap& map);

// Number of devices holding an identical copy of each shard.
int replication_factor(const DeviceMesh& mesh, const TensorMap& map);

class ConfigSpace {
 public:
  ConfigSpace() = default;

  static ConfigSpace enumerate(const ComputationGraph& g, int device_count,
                               const ConfigOptions& options = {});

  void set(int op, std::vector<ParallelConfig> configs);
  const std::vector<ParallelConfig>& configs(int op) const;
  std::size_t size(int op) const { return configs(op).size(); }
  bool contains(int op) const { return configs_.count(op) != 0; }
  int device_count() const { return device_count_; }

 private:
  int device_count_ = 1;
  std::map<int, std::vector<ParallelConfig>> configs_;
};

}  // namespace ftrack

#endif  // FTRACK_CONFIG_HPP_
