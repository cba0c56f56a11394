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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "prophet/dist.hpp"
#include "prophet/errors.hpp"
#include "prophet/game.hpp"
#include "prophet/kernel.hpp"
#include "prophet/reward.hpp"
#include "prophet/simplex.hpp"

using namespace prophet;

namespace {

// Game value by enumerating the vertices of {(mu, v) : M mu <= v 1 (or >=),
// sum mu = 1, mu >= 0}. MinMax minimizes v, MaxMin maximizes it.
double vertex_enumeration_value(const Eigen::MatrixXd& m, GameSense sense) {
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  const int constraints = rows + cols;
  const bool minimize = sense == GameSense::kMinMax;
  double best = minimize ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  std::vector<bool> active(constraints, false);
  std::fill(active.begin(), active.begin() + cols, true);
  std::sort(active.begin(), active.end());
  do {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cols + 1, cols + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(cols + 1);
    int r = 0;
    for (int k = 0; k < constraints; ++k) {
      if (!active[k]) continue;
      if (k < rows) {
        a.row(r).head(cols) = m.row(k);
        a(r, cols) = -1.0;
      } else {
        a(r, k - rows) = 1.0;
      }
      ++r;
    }
    a.row(cols).head(cols).setOnes();
    rhs(cols) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < cols + 1) continue;
    const Eigen::VectorXd z = lu.solve(rhs);
    const Eigen::VectorXd mu = z.head(cols);
    const double v = z(cols);
    if (mu.minCoeff() < -1e-12) continue;
    const Eigen::VectorXd payoff = m * mu;
    const bool feasible = minimize ? payoff.maxCoeff() <= v + 1e-12 : payoff.minCoeff() >= v - 1e-12;
    if (feasible) best = minimize ? std::min(best, v) : std::max(best, v);
  } while (std::next_permutation(active.begin(), active.end()));
  return best;
}

void check_strategy(const std::vector<double>& s) {
  CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(*std::min_element(s.begin(), s.end()) >= 0.0);
}

}  // namespace

TEST_CASE("simplex on small programs") {
  SUBCASE("textbook maximum") {
    Eigen::MatrixXd a(3, 2);
    a << 1, 0, 0, 2, 3, 2;
    const std::vector<double> b = {4, 12, 18}, c = {3, 5};
    const auto r = solve_lp(a, b, c);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(36.0));
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(6.0));
    // Strong duality.
    CHECK(b[0] * r.dual[0] + b[1] * r.dual[1] + b[2] * r.dual[2] == doctest::Approx(36.0));
  }
  SUBCASE("negative right-hand side needs phase one") {
    Eigen::MatrixXd a(2, 2);
    a << -1, -1, 1, 0;
    const std::vector<double> b = {-2, 3}, c = {-1, -2};
    const auto r = solve_lp(a, b, c);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(-2.0));
  }
  SUBCASE("infeasible and unbounded") {
    Eigen::MatrixXd a(2, 1);
    a << 1, -1;
    CHECK(solve_lp(a, std::vector<double>{1, -2}, std::vector<double>{1}).status == LpStatus::kInfeasible);
    Eigen::MatrixXd u(1, 2);
    u << 1, -1;
    CHECK(solve_lp(u, std::vector<double>{1}, std::vector<double>{0, 1}).status == LpStatus::kUnbounded);
  }
  SUBCASE("Bland's rule alone reaches the same optimum") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd a(12, 9);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = unit(rng);
    const std::vector<double> b(12, 1.0), c(9, 1.0);
    SimplexOptions bland;
    bland.bland_only = true;
    const auto r1 = solve_lp(a, b, c);
    const auto r2 = solve_lp(a, b, c, bland);
    CHECK(r1.objective == doctest::Approx(r2.objective).epsilon(1e-12));
    CHECK(r2.bland_pivots == r2.pivots);
  }
}

TEST_CASE("trivial games") {
  Eigen::MatrixXd one(1, 1);
  one << 0.7;
  const auto s = solve_game(one, GameSense::kMinMax);
  CHECK(s.value == doctest::Approx(0.7));
  CHECK(s.lambda == std::vector<double>{1.0});
  CHECK(s.mu == std::vector<double>{1.0});

  Eigen::MatrixXd pennies(2, 2);
  pennies << 0, 1, 1, 0;
  const auto p = solve_game(pennies, GameSense::kMaxMin);
  CHECK(p.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.mu[0] == doctest::Approx(0.5));
  CHECK(p.lambda[0] == doctest::Approx(0.5));
}

TEST_CASE("small games match vertex enumeration") {
  const auto r = payoff_matrix(KernelKind::kRatio, 2, 4).entries;
  CHECK(solve_game(r, GameSense::kMinMax).value ==
        doctest::Approx(vertex_enumeration_value(r, GameSense::kMinMax)).epsilon(1e-9));
  const auto a = payoff_matrix(KernelKind::kDifference, 3, 5).entries;
  CHECK(solve_game(a, GameSense::kMaxMin).value ==
        doctest::Approx(vertex_enumeration_value(a, GameSense::kMaxMin)).epsilon(1e-9));

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(-1.0, 2.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int size = rep % 2 == 0 ? 3 : 4;
    Eigen::MatrixXd m(size, size);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = unit(rng);
    for (GameSense sense : {GameSense::kMinMax, GameSense::kMaxMin}) {
      const auto sol = solve_game(m, sense);
      CHECK(std::abs(sol.value - vertex_enumeration_value(m, sense)) <= 1e-9);
      check_strategy(sol.lambda);
      check_strategy(sol.mu);
      const auto cert = certify(m, sense, sol.lambda, sol.mu);
      CHECK(cert.upper - cert.lower <= 1e-7);
      CHECK(cert.lower <= sol.value + 1e-15);
      CHECK(sol.value <= cert.upper + 1e-15);
    }
  }
}

TEST_CASE("iterative solver agrees with simplex") {
  const auto m = payoff_matrix(KernelKind::kRatio, 5, 30).entries;
  GameOptions iterative;
  iterative.method = GameMethod::kIterative;
  iterative.tolerance = 1e-4;
  const auto a = solve_game(m, GameSense::kMinMax);
  const auto b = solve_game(m, GameSense::kMinMax, iterative);
  CHECK(b.method == GameMethod::kIterative);
  CHECK(b.gap <= 1e-4);
  CHECK(std::abs(a.value - b.value) <= 1e-4);

  const auto d = payoff_matrix(KernelKind::kDifference, 5, 30).entries;
  const auto c = solve_game(d, GameSense::kMaxMin);
  const auto e = solve_game(d, GameSense::kMaxMin, iterative);
  CHECK(std::abs(c.value - e.value) <= 1e-4);

  GameOptions starved = iterative;
  starved.tolerance = 1e-12;
  starved.max_iterations = 10;
  CHECK_THROWS_AS(solve_game(m, GameSense::kMinMax, starved), SolverError);
}

TEST_CASE("ratio report invariants") {
  const auto rep = sharp_ratio(10, 200, 1e-7);
  CHECK(rep.kind == KernelKind::kRatio);
  CHECK(rep.gap <= 1e-7);
  CHECK(rep.certified_bracket);
  CHECK(rep.bracket.lower >= corollary1_constant(10));
  CHECK(rep.bracket.upper == doctest::Approx(rep.value + err_bound_ratio(10, 200) + rep.gap));

  const auto m = payoff_matrix(KernelKind::kRatio, 10, 200).entries;
  const auto cert = certify(m, GameSense::kMinMax, rep.solution.lambda, rep.solution.mu);
  CHECK(cert.upper - cert.lower <= rep.gap + 1e-15);
  CHECK(std::abs(cert.upper - rep.value) <= rep.gap);

  OptimalRuleOptions grid;
  grid.mode = SearchMode::kGridExact;
  grid.grid_size = 200;
  const auto best = optimal_rule(rep.lfd, 10, grid);
  CHECK(std::abs(best.evaluation.ratio - rep.value) <= rep.gap + 1e-9);
  CHECK(in_grid_class(rep.lfd, 200));

  const double cutoff = 1.0 - support_cutoff(10) / 10.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < rep.solution.lambda.size(); ++i) {
    if ((i + 1.0) / 200.0 >= cutoff) tail += rep.solution.lambda[i];
  }
  CHECK(tail <= 10 * 1e-7);

  const auto low = sharp_ratio(3, 100, 1e-7);
  CHECK_FALSE(low.certified_bracket);
  CHECK(low.bracket.lower == doctest::Approx(corollary1_constant(3)));
  CHECK(low.value >= corollary1_constant(3) - 1e-9);
}

TEST_CASE("regret report invariants") {
  const auto rep = sharp_regret(10, 200, 1e-7);
  CHECK(rep.gap <= 1e-7);
  CHECK(rep.bracket.lower == doctest::Approx(rep.value - err_bound_diff(10, 200) - rep.gap));
  CHECK(rep.lfd.max_value() <= 1.0 + 1e-12);
  OptimalRuleOptions grid;
  grid.mode = SearchMode::kGridExact;
  grid.grid_size = 200;
  const auto best = optimal_rule(rep.lfd, 10, grid);
  CHECK(std::abs(best.evaluation.regret - rep.value) <= rep.gap + 1e-9);

  const auto fine = sharp_regret(2, 2000, 1e-7);
  const auto coarse = sharp_regret(2, 100, 1e-7);
  CHECK(std::abs(coarse.value - fine.value) <= err_bound_diff(2, 100) + err_bound_diff(2, 2000));
  CHECK(fine.value + err_bound_diff(2, 2000) >= 0.0625);
}

TEST_CASE("cross-validation against alternative distributions") {
  const auto rep = sharp_ratio(10, 100, 1e-7);
  CHECK(verify_solution(rep, {rep.lfd}).ok);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DiscreteDistribution> members;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> inc(99);
    for (double& v : inc) v = unit(rng) < 0.9 ? 0.0 : std::pow(unit(rng), 3) * 10.0;
    inc.back() += 0.01;
    members.push_back(QuantileIncrements(100, inc).to_distribution());
  }
  CHECK(verify_solution(rep, members).ok);

  const auto hundred = sharp_ratio(100, 200, 1e-7);
  const double x = 1.0 / 100;
  CHECK(verify_solution(hundred, {samuel_cahn_distribution(100, x, x, 10.0)}).ok);

  // A report claiming too high a floor is refuted.
  SharpConstantReport inflated = rep;
  inflated.bracket.lower = 0.99;
  const auto v = verify_solution(inflated, {rep.lfd});
  CHECK_FALSE(v.ok);
  REQUIRE(v.counterexamples.size() == 1);
  CHECK(v.counterexamples[0].ratio < 0.99);
}

TEST_CASE("tolerance defaults") {
  CHECK(default_game_tolerance(2000) == 1e-7);
  CHECK(default_game_tolerance(2001) == 1e-5);
  CHECK_THROWS_AS(sharp_ratio(1, 100, 1e-7), InvalidArgument);
}
