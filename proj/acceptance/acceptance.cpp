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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ftrack/bench.hpp"
#include "ftrack/costmodel.hpp"
#include "ftrack/fixtures.hpp"
#include "ftrack/frontier.hpp"
#include "ftrack/io.hpp"
#include "ftrack/solver.hpp"

namespace {

using namespace ftrack;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Verdict& v) {
  std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

bool same_costs(const FrontierResult& a, const FrontierResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].memory != b.points[i].memory || a.points[i].time != b.points[i].time) return false;
  }
  return true;
}

bool recomputes(const FrontierResult& r, const Fixture& f) {
  for (const auto& p : r.points) {
    const auto c = total_cost(p.strategy, f.graph, f.tables);
    if (c.memory != p.memory || c.time != p.time) return false;
  }
  return true;
}

bool mutually_non_dominated(const FrontierResult& r) {
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    for (std::size_t j = 0; j < r.points.size(); ++j) {
      if (i != j && r.points[j].memory <= r.points[i].memory && r.points[j].time <= r.points[i].time) {
        return false;
      }
    }
  }
  return true;
}

std::string solve_text(const Fixture& f, int threads) {
  SolveOptions o;
  o.threads = threads;
  const auto r = ft(f.graph, f.tables, o);
  return result_to_json(r, f.graph) + trace_to_json(r.log);
}

// Fixture suites of criteria 1-3, shared with the determinism check.
std::vector<Fixture> linear_suite() {
  std::mt19937_64 rng(1);
  std::vector<Fixture> out;
  for (int i = 0; i < 200; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const int k = std::uniform_int_distribution<int>(1, 6)(rng);
    out.push_back(gen_fixture(FixtureKind::kChain, n, k, rng()));
  }
  return out;
}

std::vector<Fixture> residual_suite() {
  std::mt19937_64 rng(2);
  std::vector<Fixture> out;
  // Largest K keeping K^(1 + 3 blocks) within 10^5 strategies.
  const int max_k[] = {0, 17, 5, 3};
  for (int i = 0; i < 100; ++i) {
    const int blocks = std::uniform_int_distribution<int>(1, 3)(rng);
    const int k = std::uniform_int_distribution<int>(1, max_k[blocks])(rng);
    out.push_back(gen_fixture(FixtureKind::kResidual, blocks, k, rng()));
  }
  return out;
}

std::vector<Fixture> shared_suite() {
  std::mt19937_64 rng(3);
  std::vector<Fixture> out;
  const int max_k[] = {0, 0, 0, 17, 10, 6, 4, 3};
  for (int i = 0; i < 50; ++i) {
    const int n = std::uniform_int_distribution<int>(3, 7)(rng);
    const int k = std::uniform_int_distribution<int>(2, max_k[n])(rng);
    out.push_back(gen_fixture(FixtureKind::kSharedInput, n, k, rng()));
  }
  return out;
}

Verdict exact_suite(const std::vector<Fixture>& suite, double budget_s, bool require_no_heuristic) {
  const auto t0 = Clock::now();
  int mismatched = 0, unrecomputable = 0, heuristic = 0;
  for (const auto& f : suite) {
    const auto r = ft(f.graph, f.tables);
    const auto oracle = brute_force(f.graph, f.tables);
    if (!same_costs(r, oracle)) ++mismatched;
    if (!recomputes(r, f)) ++unrecomputable;
    if (r.stats.eliminations.heuristic != 0) ++heuristic;
  }
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = mismatched == 0 && unrecomputable == 0 && elapsed < budget_s &&
           (!require_no_heuristic || heuristic == 0);
  v.detail = std::to_string(suite.size()) + " graphs, " + std::to_string(mismatched) +
             " frontier mismatches, " + std::to_string(unrecomputable) + " non-recomputing strategies, " +
             std::to_string(heuristic) + " with heuristic steps, " + fmt(elapsed) + " s (limit " +
             fmt(budget_s, 0) + " s)";
  return v;
}

Verdict heuristic_quality(const std::vector<Fixture>& suite) {
  int infeasible = 0, dominated = 0, wrong_count = 0;
  double covered_sum = 0.0;
  for (const auto& f : suite) {
    const auto r = ft(f.graph, f.tables);
    const auto oracle = brute_force(f.graph, f.tables);
    if (!recomputes(r, f)) ++infeasible;
    if (!mutually_non_dominated(r)) ++dominated;
    if (r.stats.eliminations.heuristic == 0) ++wrong_count;
    std::size_t covered = 0;
    for (const auto& o : oracle.points) {
      for (const auto& p : r.points) {
        if (p.memory <= o.memory && p.time <= o.time) {
          ++covered;
          break;
        }
      }
    }
    covered_sum += static_cast<double>(covered) / static_cast<double>(oracle.points.size());
  }
  Verdict v;
  v.pass = infeasible == 0 && dominated == 0 && wrong_count == 0;
  v.detail = std::to_string(suite.size()) + " graphs, " + std::to_string(infeasible) + " infeasible, " +
             std::to_string(dominated) + " with dominated points, " + std::to_string(wrong_count) +
             " without a heuristic step; mean fraction of oracle points dominated by ft output " +
             fmt(covered_sum / static_cast<double>(suite.size()));
  return v;
}

Verdict harmonic_size() {
  const std::size_t k = 10000;
  const int trials = 200;
  double h = 0.0;
  for (std::size_t i = 1; i <= k; ++i) h += 1.0 / static_cast<double>(i);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<StrategyTuple> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = {u(rng), u(rng), i, nullptr};
    total += static_cast<double>(reduce(std::move(c)).size());
  }
  const double mean = total / trials;
  Verdict v;
  v.pass = std::abs(mean - h) <= 0.1 * h;
  v.detail = "mean |reduce| " + fmt(mean) + " vs H_K " + fmt(h, 4) + " (tolerance 10%)";
  return v;
}

Verdict complexity_trend() {
  const std::vector<int> ks{8, 16, 32};
  const auto rows = bench_linear(16, ks, 5, 5, 1);
  std::vector<double> ratio;
  std::string detail;
  for (const auto& r : rows) {
    ratio.push_back(r.ft_elimination_s / r.ldp_s);
    detail += "K=" + std::to_string(r.k) + " ratio " + fmt(ratio.back(), 2) + "; ";
  }
  Verdict v;
  v.pass = ratio[1] >= 2.0 && ratio[0] < ratio[1] && ratio[1] < ratio[2];
  v.detail = detail + "need >= 2 at K=16 and strictly increasing";
  return v;
}

Verdict reduce_oracle() {
  std::mt19937_64 rng(6);
  int wrong = 0, not_idempotent = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = rng() % 513;
    const int range = trial % 2 == 0 ? 20 : 100000;
    std::uniform_int_distribution<int> d(0, range);
    std::vector<StrategyTuple> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = {static_cast<double>(d(rng)), static_cast<double>(d(rng)), rng() % 1000, nullptr};
    // Pairwise oracle: keep x unless some y is no worse in both and differs,
    // or equals x with a smaller id (earlier position on equal ids).
    std::vector<std::pair<double, double>> expect;
    for (std::size_t i = 0; i < k; ++i) {
      bool keep = true;
      for (std::size_t j = 0; j < k && keep; ++j) {
        if (i == j) continue;
        const bool no_worse = c[j].memory <= c[i].memory && c[j].time <= c[i].time;
        const bool equal = c[j].memory == c[i].memory && c[j].time == c[i].time;
        if (no_worse && !equal) keep = false;
        if (equal && (c[j].id < c[i].id || (c[j].id == c[i].id && j < i))) keep = false;
      }
      if (keep) expect.emplace_back(c[i].memory, c[i].time);
    }
    std::sort(expect.begin(), expect.end());
    const Frontier f = reduce(c);
    std::vector<std::pair<double, double>> got;
    for (const auto& t : f) got.emplace_back(t.memory, t.time);
    if (got != expect) ++wrong;
    const Frontier again = reduce(f.tuples());
    bool same = again.size() == f.size();
    for (std::size_t i = 0; same && i < f.size(); ++i) {
      same = again[i].memory == f[i].memory && again[i].time == f[i].time && again[i].id == f[i].id;
    }
    if (!same) ++not_idempotent;
  }
  Verdict v;
  v.pass = wrong == 0 && not_idempotent == 0;
  v.detail = "1000 sets with K <= 512: " + std::to_string(wrong) + " oracle mismatches, " +
             std::to_string(not_idempotent) + " non-idempotent";
  return v;
}

Verdict communication_model() {
  BandwidthProfile p;
  p.latency = 2e-6;
  // Bandwidth rising with size, as measured collectives do.
  for (int i = 0; i <= 26; ++i) p.points.push_back({i, 1e8 * (1.0 + 0.25 * i)});
  int inexact = 0, non_monotone = 0, sweep = 0;
  for (const auto& pt : p.points) {
    const std::uint64_t b = std::uint64_t{1} << pt.log2_bytes;
    if (comm_time(b, p) != p.latency + static_cast<double>(b) / pt.bandwidth) ++inexact;
  }
  double prev = 0.0;
  const std::uint64_t top = std::uint64_t{1} << 26;
  for (std::uint64_t b = 0; b <= top; b += (b < 4096 ? 1 : 997)) {
    const double t = comm_time(b, p);
    if (t < prev) ++non_monotone;
    prev = t;
    ++sweep;
  }

  const auto dev = DeviceGraph::uniform(4, p);
  const ReschedulePlanner plan(Shape{1024}, dev);
  const std::size_t n = plan.states().size();
  int nonzero_self = 0, triangle = 0;
  std::size_t triples = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (plan.time(a, a) != 0.0) ++nonzero_self;
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c, ++triples) {
        if (plan.time(a, c) > plan.time(a, b) + plan.time(b, c)) ++triangle;
      }
    }
  }
  Verdict v;
  v.pass = inexact == 0 && non_monotone == 0 && nonzero_self == 0 && triangle == 0;
  v.detail = std::to_string(p.points.size()) + " profile points (" + std::to_string(inexact) + " inexact), " +
             std::to_string(sweep) + " sweep sizes (" + std::to_string(non_monotone) + " decreases), " +
             std::to_string(n) + " layouts of [1024] on 4 devices, " + std::to_string(triples) +
             " triples (" + std::to_string(triangle) + " triangle violations, " +
             std::to_string(nonzero_self) + " nonzero self costs)";
  return v;
}

Verdict determinism(const std::vector<const std::vector<Fixture>*>& suites) {
  int differing = 0;
  std::size_t graphs = 0;
  for (const auto* suite : suites) {
    for (const auto& f : *suite) {
      ++graphs;
      const std::string one = solve_text(f, 1);
      if (solve_text(f, 4) != one || solve_text(f, 8) != one) ++differing;
    }
  }
  Verdict v;
  v.pass = differing == 0;
  v.detail = std::to_string(graphs) + " graphs from criteria 1-3 at 1, 4 and 8 threads: " +
             std::to_string(differing) + " differ";
  return v;
}

}  // namespace

int main() {
  const auto linear = linear_suite();
  const auto residual = residual_suite();
  const auto shared = shared_suite();
  report(1, "oracle equivalence, linear graphs", exact_suite(linear, 60.0, false));
  report(2, "oracle equivalence, residual DAGs", exact_suite(residual, 120.0, true));
  report(3, "heuristic elimination quality", heuristic_quality(shared));
  report(4, "expected frontier size", harmonic_size());
  report(5, "ldp vs ft_elimination scaling", complexity_trend());
  report(6, "reduce oracle", reduce_oracle());
  report(7, "communication model", communication_model());
  report(8, "determinism across threads", determinism({&linear, &residual, &shared}));
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
