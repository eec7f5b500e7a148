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

#ifndef FTRACK_BENCH_HPP_
#define FTRACK_BENCH_HPP_

#include <cstdint>
#include <vector>

namespace ftrack {

struct BenchRow {
  int k = 0;
  double ldp_s = 0.0;
  double ft_elimination_s = 0.0;
};

// Best-of-`repeats` wall times of ldp and ft_elimination on a seeded chain of
// `n` operators with K configurations each. Both outputs are compared and a
// mismatch throws Error(kInternal).
std::vector<BenchRow> bench_linear(int n, const std::vector<int>& k_values, int repeats,
                                   std::uint64_t seed, int threads = 1);

}  // namespace ftrack

#endif  // FTRACK_BENCH_HPP_
