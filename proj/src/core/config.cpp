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

#include "ftrack/config.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ftrack/error.hpp"

namespace ftrack {

int DeviceMesh::device_count() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

bool TensorMap::is_unsplit() const {
  return std::all_of(map.begin(), map.end(), [](int m) { return m < 0; });
}

bool ParallelConfig::is_full_replication() const {
  return std::all_of(tensor_maps.begin(), tensor_maps.end(),
                     [](const TensorMap& m) { return m.is_unsplit(); });
}

std::vector<DeviceMesh> enumerate_meshes(int device_count, int max_rank) {
  if (device_count < 1) fail(ErrorCode::kInvalidArgument, "device_count must be >= 1");
  if (max_rank < 1) fail(ErrorCode::kInvalidArgument, "max_rank must be >= 1");
  std::vector<DeviceMesh> out;
  out.push_back({{device_count}});
  std::vector<int> prefix;
  std::function<void(int)> extend = [&](int rest) {
    if (rest == 1) {
      if (prefix.size() >= 2) out.push_back({prefix});
      return;
    }
    if (static_cast<int>(prefix.size()) == max_rank) return;
    for (int f = 2; f <= rest; ++f) {
      if (rest % f != 0) continue;
      prefix.push_back(f);
      extend(rest / f);
      prefix.pop_back();
    }
  };
  extend(device_count);
  std::stable_sort(out.begin(), out.end(), [](const DeviceMesh& a, const DeviceMesh& b) {
    if (a.dims.size() != b.dims.size()) return a.dims.size() < b.dims.size();
    return a.dims < b.dims;
  });
  return out;
}

bool is_valid_map(const Shape& shape, const DeviceMesh& mesh, const TensorMap& map) {
  if (map.map.size() != shape.size()) return false;
  std::vector<bool> used(mesh.dims.size(), false);
  for (std::size_t d = 0; d < shape.size(); ++d) {
    int m = map.map[d];
    if (m < 0) {
      if (m != -1) return false;
      continue;
    }
    if (static_cast<std::size_t>(m) >= mesh.dims.size() || used[static_cast<std::size_t>(m)]) {
      return false;
    }
    used[static_cast<std::size_t>(m)] = true;
    if (shape[d] % mesh.dims[static_cast<std::size_t>(m)] != 0) return false;
  }
  return true;
}

std::vector<TensorMap> enumerate_tensor_maps(const Shape& shape, const DeviceMesh& mesh) {
  std::vector<TensorMap> out;
  TensorMap cur;
  cur.map.assign(shape.size(), -1);
  const int rank = static_cast<int>(mesh.dims.size());
  std::function<void(std::size_t)> fill = [&](std::size_t d) {
    if (d == shape.size()) {
      if (is_valid_map(shape, mesh, cur)) out.push_back(cur);
      return;
    }
    for (int m = -1; m < rank; ++m) {
      // Size-1 mesh dims split nothing.
      if (m >= 0 && mesh.dims[static_cast<std::size_t>(m)] == 1) continue;
      cur.map[d] = m;
      fill(d + 1);
    }
    cur.map[d] = -1;
  };
  fill(0);
  return out;
}

std::vector<ParallelConfig> enumerate_configs(const Operator& op, int device_count,
                                              const ConfigOptions& options) {
  if (op.tensor_shapes.empty()) {
    fail(ErrorCode::kInvalidArgument, "operator " + std::to_string(op.id) + " has no tensors");
  }
  std::vector<ParallelConfig> out;
  bool have_replication = false;
  for (const auto& mesh : enumerate_meshes(device_count, options.max_rank)) {
    std::vector<std::vector<TensorMap>> per_tensor;
    for (const auto& shape : op.tensor_shapes) per_tensor.push_back(enumerate_tensor_maps(shape, mesh));

    ParallelConfig cfg;
    cfg.mesh = mesh;
    cfg.tensor_maps.resize(per_tensor.size());
    std::function<void(std::size_t)> combine = [&](std::size_t t) {
      if (t == per_tensor.size()) {
        if (cfg.is_full_replication()) {
          if (have_replication) return;
          have_replication = true;
        }
        ParallelConfig c = cfg;
        std::vector<bool> used(mesh.dims.size(), false);
        for (const auto& tm : c.tensor_maps) {
          for (int m : tm.map) {
            if (m >= 0) used[static_cast<std::size_t>(m)] = true;
          }
        }
        for (std::size_t m = 0; m < used.size(); ++m) {
          if (!used[m] && mesh.dims[m] > 1) c.replicated_mesh_dims.push_back(static_cast<int>(m));
        }
        out.push_back(std::move(c));
        return;
      }
      for (const auto& tm : per_tensor[t]) {
        cfg.tensor_maps[t] = tm;
        combine(t + 1);
      }
    };
    combine(0);
  }
  return out;
}

Shape shard_shape(const Shape& shape, const DeviceMesh& mesh, const TensorMap& map) {
  if (!is_valid_map(shape, mesh, map)) {
    fail(ErrorCode::kInvalidConfig, "tensor map is not valid for the shape");
  }
  Shape out = shape;
  for (std::size_t d = 0; d < shape.size(); ++d) {
    if (map.map[d] >= 0) out[d] /= mesh.dims[static_cast<std::size_t>(map.map[d])];
  }
  return out;
}

int replication_factor(const DeviceMesh& mesh, const TensorMap& map) {
  int split = 1;
  for (int m : map.map) {
    if (m >= 0) split *= mesh.dims[static_cast<std::size_t>(m)];
  }
  return mesh.device_count() / split;
}

ConfigSpace ConfigSpace::enumerate(const ComputationGraph& g, int device_count,
                                   const ConfigOptions& options) {
  ConfigSpace space;
  space.device_count_ = device_count;
  for (const auto& op : g.operators()) space.set(op.id, enumerate_configs(op, device_count, options));
  return space;
}

void ConfigSpace::set(int op, std::vector<ParallelConfig> configs) {
  if (configs.empty()) fail(ErrorCode::kInvalidArgument, "empty configuration space");
  configs_[op] = std::move(configs);
}

const std::vector<ParallelConfig>& ConfigSpace::configs(int op) const {
  auto it = configs_.find(op);
  if (it == configs_.end()) {
    fail(ErrorCode::kInvalidArgument, "no configurations for operator " + std::to_string(op));
  }
  return it->second;
}

}  // namespace ftrack
