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

#ifndef FTRACK_FIXTURES_HPP_
#define FTRACK_FIXTURES_HPP_

#include <cstdint>
#include <string>

#include "ftrack/costmodel.hpp"
#include "ftrack/graph.hpp"

namespace ftrack {

enum class FixtureKind { kChain, kResidual, kSharedInput };

// Throws Error(kInvalidArgument) for unknown names.
FixtureKind parse_fixture_kind(const std::string& name);
const char* fixture_kind_name(FixtureKind kind);

struct Fixture {
  ComputationGraph graph;
  CostTables tables;
};

// Seeded synthetic graphs with K configurations per operator and integer
// costs drawn uniformly from [0, 100] (m_p, m_t, t_c, t_s, t_x).
//   chain:        x0 -> x1 -> ... -> x(n-1)
//   residual:     n blocks; block b adds body(prev) and a bias source to prev
//   shared-input: a chain of n ops plus a mask source feeding every odd op
//                 (and the last one when that leaves fewer than two targets);
//                 needs n >= 3.
// Throws Error(kInvalidArgument) when n or K is out of range.
Fixture gen_fixture(FixtureKind kind, int n, int k, std::uint64_t seed);

// Fills every table entry with seeded integers from [0, max_cost].
void randomize_costs(const ComputationGraph& g, CostTables& tables, std::uint64_t seed,
                     int max_cost = 100);

}  // namespace ftrack

#endif  // FTRACK_FIXTURES_HPP_
