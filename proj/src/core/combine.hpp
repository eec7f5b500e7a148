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

#ifndef FTRACK_SRC_CORE_COMBINE_HPP_
#define FTRACK_SRC_CORE_COMBINE_HPP_

#include <vector>

#include "ftrack/frontier.hpp"

namespace ftrack::detail {

// A product tuple that has not been materialized yet. Only survivors of the
// reduce get a trace node.
struct Candidate {
  double memory;
  double time;
  std::uint64_t id;
  const StrategyTuple* a;
  const StrategyTuple* b;
  const StrategyTuple* c;
};

// Appends a x b x c; a null frontier acts as the identity {(empty, 0, 0)}.
inline void append_product(std::vector<Candidate>& out, const Frontier* a, const Frontier* b,
                           const Frontier* c) {
  static const StrategyTuple kIdentity{};
  static const Frontier kUnit = Frontier::singleton(kIdentity);
  const Frontier& fa = a ? *a : kUnit;
  const Frontier& fb = b ? *b : kUnit;
  const Frontier& fc = c ? *c : kUnit;
  for (const auto& x : fa) {
    for (const auto& y : fb) {
      const double m = x.memory + y.memory;
      const double t = x.time + y.time;
      for (const auto& z : fc) {
        out.push_back({m + z.memory, t + z.time, out.size(), &x, &y, &z});
      }
    }
  }
}

inline Frontier materialize(std::vector<Candidate>& candidates, bool reduce = true) {
  if (reduce) reduce_in_place(candidates);
  std::vector<StrategyTuple> tuples;
  tuples.reserve(candidates.size());
  for (const auto& c : candidates) {
    tuples.push_back({c.memory, c.time, tuples.size(), join(c.a->trace, c.b->trace, c.c->trace)});
  }
  if (!reduce) return Frontier::unreduced(std::move(tuples));
  return Frontier::from_reduced(std::move(tuples));
}

}  // namespace ftrack::detail

#endif  // FTRACK_SRC_CORE_COMBINE_HPP_
