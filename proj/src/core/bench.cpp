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

#include "ftrack/bench.hpp"

#include <chrono>
#include <limits>

#include "ftrack/eliminate.hpp"
#include "ftrack/error.hpp"
#include "ftrack/fixtures.hpp"
#include "ftrack/solver.hpp"

namespace ftrack {

namespace {

bool same_costs(const Frontier& a, const Frontier& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].memory != b[i].memory || a[i].time != b[i].time) return false;
  }
  return true;
}

}  // namespace

std::vector<BenchRow> bench_linear(int n, const std::vector<int>& k_values, int repeats,
                                   std::uint64_t seed, int threads) {
  if (n < 2 || repeats < 1) fail(ErrorCode::kInvalidArgument, "bench needs n >= 2 and repeats >= 1");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (int k : k_values) {
    const Fixture f = gen_fixture(FixtureKind::kChain, n, k, seed + static_cast<std::uint64_t>(k));
    const ElimState st = ElimState::initialize(f.graph, f.tables);
    BenchRow row;
    row.k = k;
    row.ldp_s = row.ft_elimination_s = std::numeric_limits<double>::infinity();
    LdpOptions lopts;
    lopts.threads = threads;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = clock::now();
      const Frontier a = ldp(st, lopts).frontier;
      ElimState copy = st;
      auto t1 = clock::now();
      const Frontier b = ft_elimination(std::move(copy), threads);
      auto t2 = clock::now();
      if (!same_costs(a, b)) fail(ErrorCode::kInternal, "ldp and ft_elimination disagree");
      row.ldp_s = std::min(row.ldp_s, std::chrono::duration<double>(t1 - t0).count());
      row.ft_elimination_s = std::min(row.ft_elimination_s, std::chrono::duration<double>(t2 - t1).count());
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ftrack
