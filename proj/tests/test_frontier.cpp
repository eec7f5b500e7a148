#include <random>

#include "doctest.h"
#include "ftrack/error.hpp"
#include "ftrack/frontier.hpp"
#include "test_util.hpp"

using namespace ftrack;
using ftrack::testing::costs_of;
using ftrack::testing::dominance_oracle;
using ftrack::testing::tuple;

namespace {

using Costs = std::vector<std::pair<double, double>>;

std::vector<StrategyTuple> random_set(std::mt19937_64& rng, std::size_t k, int range) {
  std::uniform_int_distribution<int> d(0, range);
  std::vector<StrategyTuple> c;
  for (std::size_t i = 0; i < k; ++i) {
    c.push_back(tuple(d(rng), d(rng), i, make_choice({static_cast<int>(i), 0})));
  }
  return c;
}

std::vector<StrategyTuple> with_op(std::vector<StrategyTuple> c, int op) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i].trace = make_choice({op, static_cast<int>(i)});
  }
  return c;
}

}  // namespace

TEST_CASE("reduce examples") {
  CHECK(reduce({}).empty());

  const auto f = reduce({tuple(2, 5, 0), tuple(3, 3, 1), tuple(4, 4, 2)});
  CHECK(costs_of(f) == Costs{{2, 5}, {3, 3}});
  CHECK(f[0].id == 0);
  CHECK(f[1].id == 1);

  const auto dup = reduce({tuple(1, 1, 7), tuple(1, 1, 3)});
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].id == 3);

  const auto same_memory = reduce({tuple(1, 4, 0), tuple(1, 2, 1)});
  CHECK(costs_of(same_memory) == Costs{{1, 2}});
  const auto same_time = reduce({tuple(3, 2, 0), tuple(1, 2, 1)});
  CHECK(costs_of(same_time) == Costs{{1, 2}});
}

TEST_CASE("product and union examples") {
  const auto a = make_choice({0, 0});
  const auto b = make_choice({1, 0});
  const auto p = product(std::vector{tuple(1, 2, 0, a)}, std::vector{tuple(3, 4, 0, b)});
  REQUIRE(p.size() == 1);
  CHECK(p[0].memory == 4);
  CHECK(p[0].time == 6);
  CHECK(choices_of(p[0].trace) == std::vector<Assignment>{{0, 0}, {1, 0}});

  const std::vector<StrategyTuple> f{tuple(1, 5, 0, a), tuple(2, 3, 1, make_choice({0, 1}))};
  const auto id = product(f, std::vector{tuple(0, 0)});
  REQUIRE(id.size() == 2);
  CHECK(costs_of(id) == costs_of(f));
  CHECK(choices_of(id[1].trace) == std::vector<Assignment>{{0, 1}});

  const std::vector<StrategyTuple> g{tuple(10, 20, 0, b), tuple(30, 40, 1, make_choice({1, 1}))};
  const auto four = product(f, g);
  CHECK(costs_of(four) == Costs{{11, 25}, {31, 45}, {12, 23}, {32, 43}});

  CHECK_THROWS_AS(product(f, f), Error);

  CHECK(costs_of(unite(f, std::vector<StrategyTuple>{})) == costs_of(f));
  CHECK(unite(f, g).size() == 4);
  const auto staircase = reduce(unite(std::vector{tuple(1, 3, 0)}, std::vector{tuple(2, 2, 1), tuple(3, 1, 2)}));
  CHECK(costs_of(staircase) == Costs{{1, 3}, {2, 2}, {3, 1}});
}

TEST_CASE("traces") {
  CHECK(join(nullptr, nullptr) == nullptr);
  const auto a = make_choice({4, 2});
  CHECK(join(a, nullptr) == a);
  const auto t = join(a, make_choice({1, 0}), make_choice({3, 1}));
  CHECK(choices_of(t) == std::vector<Assignment>{{4, 2}, {1, 0}, {3, 1}});
  // Deep chains do not recurse.
  TracePtr chain = make_choice({0, 0});
  for (int i = 1; i < 200000; ++i) chain = join(chain, make_choice({i, 0}));
  CHECK(choices_of(chain).size() == 200000);
}

TEST_CASE("property: reduce matches the pairwise oracle and is idempotent") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = rng() % 200;
    const int range = trial % 3 == 0 ? 10 : 1000;
    auto c = random_set(rng, k, range);
    const auto f = reduce(c);
    CHECK(f.is_staircase());
    CHECK(costs_of(f) == dominance_oracle(c));
    const auto again = reduce(f.tuples());
    CHECK(costs_of(again) == costs_of(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(again[i].id == f[i].id);
  }
}

TEST_CASE("property: product is associative after reduce") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = with_op(random_set(rng, 1 + rng() % 8, 50), 0);
    const auto b = with_op(random_set(rng, 1 + rng() % 8, 50), 1);
    const auto c = with_op(random_set(rng, 1 + rng() % 8, 50), 2);
    const auto left = reduce(product(product(a, b), c));
    const auto right = reduce(product(a, product(b, c)));
    CHECK(costs_of(left) == costs_of(right));
  }
}

TEST_CASE("frontier size follows the harmonic number on random costs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t k = 1000;
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= k; ++i) harmonic += 1.0 / static_cast<double>(i);
  double total = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<StrategyTuple> c;
    for (std::size_t i = 0; i < k; ++i) c.push_back(tuple(u(rng), u(rng), i));
    total += static_cast<double>(reduce(std::move(c)).size());
  }
  CHECK(total / trials == doctest::Approx(harmonic).epsilon(0.1));
}
