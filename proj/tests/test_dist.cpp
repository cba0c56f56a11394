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
#include <vector>

#include "prophet/dist.hpp"
#include "prophet/errors.hpp"

using namespace prophet;

namespace {

// E max over all |atoms|^n equally weighted index tuples.
double brute_force_prophet(const DiscreteDistribution& dist, int n) {
  const auto& atoms = dist.atoms();
  const std::size_t k = atoms.size();
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0, best = 0.0;
    for (std::size_t i : idx) {
      prob *= atoms[i].prob;
      best = std::max(best, atoms[i].value);
    }
    total += prob * best;
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
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    const double w = 0.05 + unit(rng);
    atoms.push_back({std::round(unit(rng) * 40.0) / 8.0, w});
    mass += w;
  }
  for (Atom& a : atoms) a.prob /= mass;
  return DiscreteDistribution::merged(atoms);
}

}  // namespace

TEST_CASE("construction validates atoms") {
  CHECK_THROWS_AS(DiscreteDistribution({}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteDistribution({{1.0, 0.5}, {0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteDistribution({{-1.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.4}}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 0.0}, {1.0, 1.0}}), InvalidArgument);

  const auto d = DiscreteDistribution::merged({{2.0, 0.25}, {1.0, 0.25}, {2.0, 0.5}});
  REQUIRE(d.size() == 2);
  CHECK(d.atoms()[0].value == 1.0);
  CHECK(d.atoms()[1].prob == doctest::Approx(0.75));
}

TEST_CASE("cdf, masses and quantiles") {
  const DiscreteDistribution d({{0.0, 0.2}, {1.0, 0.3}, {3.0, 0.5}});
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.2));
  CHECK(d.cdf_left(1.0) == doctest::Approx(0.2));
  CHECK(d.cdf(2.0) == doctest::Approx(0.5));
  CHECK(d.mass_at(3.0) == doctest::Approx(0.5));
  CHECK(d.mass_at(2.0) == 0.0);
  CHECK(d.f_p(1.0, 0.5) == doctest::Approx(0.35));
  CHECK_THROWS_AS(d.f_p(1.0, 1.5), InvalidArgument);

  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(0.2) == 0.0);
  CHECK(d.quantile(0.2000001) == 1.0);
  CHECK(d.quantile(0.5) == 1.0);
  CHECK(d.quantile(1.0) == 3.0);
  CHECK(d.u_quantile(2.0) == 1.0);
  CHECK(d.u_quantile(1.0) == 0.0);

  CHECK(d.mean() == doctest::Approx(1.8));
  CHECK(d.second_moment() == doctest::Approx(0.3 + 4.5));
}

TEST_CASE("tail integrals agree with direct sums") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = random_distribution(rng, 5);
    for (double theta : {0.0, 0.7, 1.25, 2.5, 6.0}) {
      double tail = 0.0, partial = 0.0;
      for (const Atom& a : d.atoms()) {
        tail += a.prob * std::max(0.0, a.value - theta);
        if (a.value <= theta) partial += a.prob * a.value;
      }
      CHECK(d.upper_tail(theta) == doctest::Approx(tail).epsilon(1e-12));
      CHECK(d.partial_mean(theta) == doctest::Approx(partial).epsilon(1e-12));
    }
  }
}

TEST_CASE("prophet value") {
  const DiscreteDistribution thirds({{0.0, 1.0 / 3}, {1.0, 1.0 / 3}, {2.0, 1.0 / 3}});
  CHECK(prophet_value(thirds, 2) == doctest::Approx(13.0 / 9.0).epsilon(1e-14));
  CHECK(prophet_value(DiscreteDistribution::point_mass(2.5), 7) == 2.5);

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    const auto d = random_distribution(rng, 3);
    for (int n = 1; n <= 4; ++n) {
      CHECK(prophet_value(d, n) == doctest::Approx(brute_force_prophet(d, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("least favorable distributions from adversary strategies") {
  const std::vector<double> e1 = {1.0};
  const auto two = lfd_from_mu_ratio(e1, 2, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.atoms()[1].value == doctest::Approx(4.0 / 3.0));
  CHECK(two.atoms()[1].prob == doctest::Approx(0.5));

  const std::vector<double> last = {0.0, 0.0, 0.0, 0.0, 1.0};
  const auto tail = lfd_from_mu_ratio(last, 5, 6);
  REQUIRE(tail.size() == 2);
  CHECK(tail.atoms()[0].value == 0.0);
  CHECK(tail.atoms()[0].prob == doctest::Approx(5.0 / 6.0));

  const std::vector<double> first = {1.0, 0.0, 0.0};
  const auto diff = lfd_from_mu_diff(first, 4);
  REQUIRE(diff.size() == 2);
  CHECK(diff.atoms()[0].prob == doctest::Approx(0.25));
  CHECK(diff.atoms()[1].value == doctest::Approx(1.0));
  CHECK(diff.atoms()[1].prob == doctest::Approx(0.75));
}

TEST_CASE("grid class membership") {
  const QuantileIncrements inc(4, {1.0, 0.0, 2.0});
  const auto levels = inc.levels();
  CHECK(levels == std::vector<double>{1.0, 1.0, 3.0});
  const auto d = inc.to_distribution();
  CHECK(in_grid_class(d, 4));
  CHECK_FALSE(in_grid_class(DiscreteDistribution({{0.0, 0.3}, {1.0, 0.7}}), 4));
  CHECK(grid_atoms(d, 4) == std::vector<double>{0.0, 1.0, 1.0, 3.0});
  CHECK_THROWS_AS(QuantileIncrements(4, {1.0, -1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(QuantileIncrements(4, {1.0}), InvalidArgument);
}
