// Copyright 2026 The prophet-sharp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "prophet/dist.hpp"
#include "prophet/errors.hpp"
#include "prophet/reward.hpp"

using namespace prophet;

namespace {

// Expected reward of tau_p(theta) by enumerating every sequence of atoms.
double brute_force_reward(const DiscreteDistribution& dist, int n, const ThresholdRule& rule) {
  const auto& atoms = dist.atoms();
  const std::size_t k = atoms.size();
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    for (std::size_t i : idx) prob *= atoms[i].prob;
    double running = 1.0, reward = 0.0;
    for (int t = 0; t < n; ++t) {
      const double x = atoms[idx[t]].value;
      double stop = 0.0;
      if (t == n - 1 || x > rule.theta) {
        stop = 1.0;
      } else if (x == rule.theta) {
        stop = rule.p;
      }
      reward += running * stop * x;
      running *= 1.0 - stop;
    }
    total += prob * reward;
    int pos = 0;
    while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, int max_atoms) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Atom> atoms;
  double mass = 0.0;
  for (int i = count(rng); i > 0; --i) {
    const double w = 0.05 + unit(rng);
    atoms.push_back({5.0 * unit(rng), w});
    mass += w;
  }
  for (Atom& a : atoms) a.prob /= mass;
  return DiscreteDistribution::merged(atoms);
}

ThresholdRule random_rule(std::mt19937_64& rng, const DiscreteDistribution& d) {
  std::uniform_int_distribution<std::size_t> pick(0, d.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t i = pick(rng);
  const double theta = i < d.size() ? d.atoms()[i].value : 5.0 * unit(rng);
  return {theta, unit(rng)};
}

}  // namespace

TEST_CASE("two-point example") {
  const DiscreteDistribution d({{0.0, 0.5}, {1.0, 0.5}});
  const ThresholdRule rule{0.0, 0.0};
  CHECK(reward_v1(d, 2, rule) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(reward_v2(d, 2, rule) == doctest::Approx(0.75).epsilon(1e-15));
  const auto best = optimal_rule(d, 2);
  CHECK(best.evaluation.value == doctest::Approx(0.75));
  CHECK(best.evaluation.ratio == doctest::Approx(1.0));
}

TEST_CASE("rule validation") {
  CHECK_THROWS_AS((ThresholdRule{-1.0, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ThresholdRule{1.0, 1.5}.validate()), InvalidArgument);
  CHECK_NOTHROW((ThresholdRule{0.0, 1.0}.validate()));
}

TEST_CASE("both reward forms match enumeration") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 400; ++rep) {
    const auto d = random_distribution(rng, 3);
    const auto rule = random_rule(rng, d);
    for (int n = 2; n <= 4; ++n) {
      const double oracle = brute_force_reward(d, n, rule);
      CHECK(reward_v1(d, n, rule) == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(reward_v2(d, n, rule) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("level rules hit the requested no-stop probability") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto d = random_distribution(rng, 5);
    const double x = unit(rng);
    const auto rule = level_rule(d, x);
    CHECK(d.f_p(rule.theta, rule.p) == doctest::Approx(x).epsilon(1e-12));
    for (int n : {2, 5, 9}) {
      CHECK(reward_by_level(d, n, x) == doctest::Approx(reward_v1(d, n, rule)).epsilon(1e-11));
    }
  }
}

TEST_CASE("optimal rule on grid members beats every level") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int grid = 8;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> inc(grid - 1);
    for (double& v : inc) v = unit(rng) < 0.5 ? 0.0 : unit(rng);
    inc.back() += 0.1;
    const auto d = QuantileIncrements(grid, inc).to_distribution();
    OptimalRuleOptions opts;
    opts.mode = SearchMode::kGridExact;
    opts.grid_size = grid;
    const auto best = optimal_rule(d, 6, opts);
    double oracle = 0.0;
    for (int i = 1; i < grid; ++i) {
      oracle = std::max(oracle, brute_force_reward(d, 6, level_rule(d, static_cast<double>(i) / grid)));
    }
    CHECK(best.evaluation.value == doctest::Approx(oracle).epsilon(1e-12));
    const auto searched = optimal_rule(d, 6);
    CHECK(searched.evaluation.value + searched.value_gap >= oracle - 1e-12);
  }
}

TEST_CASE("prophet inequality floor") {
  CHECK(corollary1_constant(2) == doctest::Approx(0.75));
  CHECK(corollary1_constant(100) == doctest::Approx(0.6340).epsilon(1e-4));
  CHECK(corollary1_constant(100000) > 1.0 - std::exp(-1.0));

  const DiscreteDistribution d({{0.0, 0.95}, {1.0, 0.05}});
  const auto rule = corollary1_rule(d, 10);
  CHECK(rule.theta == 0.0);
  CHECK(rule.p == doctest::Approx(1.0 / 19.0).epsilon(1e-12));

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 300; ++rep) {
    const auto dist = random_distribution(rng, 5);
    for (int n : {2, 3, 6, 20}) {
      const auto r = corollary1_rule(dist, n);
      CHECK(evaluate_rule(dist, n, r).ratio >= corollary1_constant(n) - 1e-12);
    }
  }
}

TEST_CASE("growth bound") {
  const DiscreteDistribution d({{0.0, 0.5}, {1.0, 0.5}});
  const auto g = growth_bound_check(d, 2, 1);
  CHECK(g.lhs == doctest::Approx(0.75));
  CHECK(g.lambda == doctest::Approx(2.0 / 3.0));
  CHECK(g.rhs == doctest::Approx(0.625));

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const auto dist = random_distribution(rng, 5);
    const auto b = growth_bound_check(dist, 4, 3);
    CHECK(b.lambda == doctest::Approx(std::pow(1.0 - 1.0 / 7.0, 3)));
  }
}

TEST_CASE("three-atom fixture closed forms") {
  const auto cf = samuel_cahn_closed_forms(10, 0.5, 2.0, 3.0);
  CHECK(cf.stop_above_1 == doctest::Approx(0.35).epsilon(1e-15));

  for (auto [n, a, b, c] : {std::tuple{10, 0.1, 0.1, std::sqrt(10.0)}, std::tuple{100, 0.01, 0.01, 10.0},
                            std::tuple{10, 0.5, 2.0, 3.0}}) {
    const auto d = samuel_cahn_distribution(n, a, b, c);
    const auto v = samuel_cahn_closed_forms(n, a, b, c);
    CHECK(prophet_value(d, n) == doctest::Approx(v.prophet).epsilon(1e-12));
    CHECK(reward_v1(d, n, {0.0, 0.0}) == doctest::Approx(v.stop_above_0).epsilon(1e-12));
    CHECK(reward_v1(d, n, {a, 0.0}) == doctest::Approx(v.stop_above_a).epsilon(1e-12));
    CHECK(reward_v1(d, n, {1.0, 0.0}) == doctest::Approx(v.stop_above_1).epsilon(1e-12));
  }

  const int n = 10000;
  const double x = 1.0 / n;
  const auto v = samuel_cahn_closed_forms(n, x, x, std::sqrt(static_cast<double>(n)));
  const double best = std::max({v.stop_above_0, v.stop_above_a, v.stop_above_1});
  CHECK(best / v.prophet > 0.45);
  CHECK(best / v.prophet < 0.55);
}

TEST_CASE("two-atom fixture") {
  const auto d = ehsani_distribution(100);
  REQUIRE(d.size() == 2);
  CHECK(d.atoms()[1].prob == doctest::Approx(1e-4));
  CHECK(optimal_rule(d, 100).evaluation.ratio > 0.95);
}
