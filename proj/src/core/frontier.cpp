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

#include "ftrack/frontier.hpp"

#include <cassert>
#include <set>

#include "ftrack/error.hpp"

namespace ftrack {

TracePtr make_choice(Assignment a) {
  auto t = std::make_shared<Trace>();
  t->choice = a;
  return t;
}

TracePtr join(TracePtr a, TracePtr b, TracePtr c) {
  const int present = (a != nullptr) + (b != nullptr) + (c != nullptr);
  if (present == 0) return nullptr;
  if (present == 1) return a ? a : (b ? b : c);
  auto t = std::make_shared<Trace>();
  t->parts = {std::move(a), std::move(b), std::move(c)};
  return t;
}

void collect_choices(const TracePtr& root, std::vector<Assignment>& out) {
  std::vector<const Trace*> stack;
  if (root) stack.push_back(root.get());
  while (!stack.empty()) {
    const Trace* t = stack.back();
    stack.pop_back();
    if (t->choice) out.push_back(*t->choice);
    for (auto it = t->parts.rbegin(); it != t->parts.rend(); ++it) {
      if (*it) stack.push_back(it->get());
    }
  }
}

std::vector<Assignment> choices_of(const TracePtr& t) {
  std::vector<Assignment> out;
  collect_choices(t, out);
  return out;
}

Frontier Frontier::singleton(StrategyTuple t) {
  Frontier f;
  f.tuples_.push_back(std::move(t));
  return f;
}

Frontier Frontier::from_reduced(std::vector<StrategyTuple> tuples) {
  Frontier f;
  f.tuples_ = std::move(tuples);
  assert(f.is_staircase());
  return f;
}

Frontier Frontier::unreduced(std::vector<StrategyTuple> tuples) {
  Frontier f;
  f.tuples_ = std::move(tuples);
  return f;
}

bool Frontier::is_staircase() const {
  for (std::size_t i = 1; i < tuples_.size(); ++i) {
    if (!(tuples_[i - 1].memory < tuples_[i].memory)) return false;
    if (!(tuples_[i - 1].time > tuples_[i].time)) return false;
  }
  return true;
}

Frontier reduce(std::vector<StrategyTuple> c) {
  reduce_in_place(c);
  return Frontier::from_reduced(std::move(c));
}

std::vector<StrategyTuple> product(std::span<const StrategyTuple> a,
                                   std::span<const StrategyTuple> b) {
  std::set<int> left_ops;
  for (const auto& t : a) {
    for (const auto& c : choices_of(t.trace)) left_ops.insert(c.op);
  }
  for (const auto& t : b) {
    for (const auto& c : choices_of(t.trace)) {
      if (left_ops.count(c.op)) {
        fail(ErrorCode::kOverlappingStrategies,
             "both strategies assign operator " + std::to_string(c.op));
      }
    }
  }
  std::vector<StrategyTuple> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.push_back({x.memory + y.memory, x.time + y.time, out.size(), join(x.trace, y.trace)});
    }
  }
  return out;
}

std::vector<StrategyTuple> unite(std::span<const StrategyTuple> a,
                                 std::span<const StrategyTuple> b) {
  std::vector<StrategyTuple> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace ftrack
