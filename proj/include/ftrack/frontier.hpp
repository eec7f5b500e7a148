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

#ifndef FTRACK_FRONTIER_HPP_
#define FTRACK_FRONTIER_HPP_

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ftrack {

struct Assignment {
  int op = 0;
  int cfg = 0;
  auto operator<=>(const Assignment&) const = default;
};

// Provenance of a (partial) strategy: an immutable tree whose leaves hold
// operator choices. A product node points at the tuples it was built from.
struct Trace;
using TracePtr = std::shared_ptr<const Trace>;

struct Trace {
  std::optional<Assignment> choice;
  std::array<TracePtr, 3> parts;
};

TracePtr make_choice(Assignment a);
// Null parts are skipped; a single non-null part is returned as is.
TracePtr join(TracePtr a, TracePtr b, TracePtr c = nullptr);
// Appends every choice reachable from `t`.
void collect_choices(const TracePtr& t, std::vector<Assignment>& out);
std::vector<Assignment> choices_of(const TracePtr& t);

struct StrategyTuple {
  double memory = 0.0;
  double time = 0.0;
  std::uint64_t id = 0;  // final tie-break after (memory, time)
  TracePtr trace;
};

// Sorts by (memory, time, id) and keeps a tuple iff its time is strictly
// below every time seen before it. Works on any T with memory/time/id.
template <class T>
void reduce_in_place(std::vector<T>& c) {
  std::sort(c.begin(), c.end(), [](const T& a, const T& b) {
    if (a.memory != b.memory) return a.memory < b.memory;
    if (a.time != b.time) return a.time < b.time;
    return a.id < b.id;
  });
  double best = std::numeric_limits<double>::infinity();
  std::size_t kept = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].time < best) {
      best = c[i].time;
      if (kept != i) c[kept] = std::move(c[i]);
      ++kept;
    }
  }
  c.erase(c.begin() + static_cast<std::ptrdiff_t>(kept), c.end());
}

// A set of mutually non-dominated tuples, ascending in memory and strictly
// descending in time.
class Frontier {
 public:
  Frontier() = default;

  static Frontier singleton(StrategyTuple t);
  // Caller guarantees the staircase invariant (checked in debug builds).
  static Frontier from_reduced(std::vector<StrategyTuple> tuples);
  // No invariant; only for runs that deliberately skip reduce.
  static Frontier unreduced(std::vector<StrategyTuple> tuples);

  const std::vector<StrategyTuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  const StrategyTuple& operator[](std::size_t i) const { return tuples_[i]; }
  auto begin() const { return tuples_.begin(); }
  auto end() const { return tuples_.end(); }

  bool is_staircase() const;

 private:
  std::vector<StrategyTuple> tuples_;
};

Frontier reduce(std::vector<StrategyTuple> c);

// All pairs with summed costs and joined traces; ids are pair indices.
// Throws Error(kOverlappingStrategies) when both sides assign the same
// operator.
std::vector<StrategyTuple> product(std::span<const StrategyTuple> a,
                                   std::span<const StrategyTuple> b);
// Multiset concatenation (ids preserved).
std::vector<StrategyTuple> unite(std::span<const StrategyTuple> a,
                                 std::span<const StrategyTuple> b);

inline std::span<const StrategyTuple> view(const Frontier& f) { return f.tuples(); }

}  // namespace ftrack

#endif  // FTRACK_FRONTIER_HPP_
