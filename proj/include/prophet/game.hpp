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

#ifndef PROPHET_GAME_HPP_
#define PROPHET_GAME_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prophet/dist.hpp"
#include "prophet/kernel.hpp"
#include "prophet/reward.hpp"

namespace prophet {

// Which player the value is computed for. Rows always belong to the
// stopper (lambda), columns to the adversary (mu).
enum class GameSense {
  kMinMax,  // min_mu max_lambda lambda^T M mu   (ratio game)
  kMaxMin,  // max_mu min_lambda lambda^T M mu   (difference game)
};

enum class GameMethod {
  kAuto,       // simplex up to kSimplexLimit strategies, iterative above
  kSimplex,    // dense tableau simplex on the LP form
  kIterative,  // entropic mirror-prox with averaged strategies
};

inline constexpr Eigen::Index kSimplexLimit = 4000;

struct GameOptions {
  double tolerance = 1e-7;
  GameMethod method = GameMethod::kAuto;
  std::size_t max_iterations = 2000000;  // iterative method only
};

/**
 * Solution of a finite zero-sum game with an arithmetic certificate.
 *
 * [lower, upper] brackets the game value (see certify()); gap = upper - lower.
 * value is the adversary's guarantee: upper for kMinMax, lower for kMaxMin.
 * It is exactly the payoff of the returned mu against a best-responding
 * stopper.
 */
struct GameSolution {
  double value = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
  std::vector<double> lambda;
  std::vector<double> mu;
  std::size_t iterations = 0;  // pivots or mirror-prox steps
  GameMethod method = GameMethod::kSimplex;
};

// Bracket [lower, upper] recomputed from the strategies alone. For
// kMinMax: upper = max_i (M mu)_i, lower = min_j (lambda^T M)_j. For
// kMaxMin: upper = max_j (lambda^T M)_j, lower = min_i (M mu)_i.
struct GameCertificate {
  double lower = 0.0;
  double upper = 0.0;
};
GameCertificate certify(const Eigen::MatrixXd& payoff, GameSense sense,
                        const std::vector<double>& lambda,
                        const std::vector<double>& mu);

// Throws SolverError when the certificate gap exceeds the tolerance.
GameSolution solve_game(const Eigen::MatrixXd& payoff, GameSense sense,
                        const GameOptions& options = {});

// 1e-7 for N <= 2000, 1e-5 above.
double default_game_tolerance(int grid_size);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct SharpConstantReport {
  KernelKind kind = KernelKind::kRatio;
  int n = 0;
  int grid_size = 0;
  double value = 0.0;
  Bracket bracket;
  // False for ratio games with n < 4: the bracket then only uses the
  // 1 - (1 - 1/n)^n floor and the grid value as an upper estimate.
  bool certified_bracket = true;
  DiscreteDistribution lfd = DiscreteDistribution::point_mass(0.0);
  ThresholdRule rule;
  int threshold_index = 0;  // i*, 1-based grid level of the optimal rule
  double gap = 0.0;
  GameSolution solution;
};

// Sharp ratio constant over D_N and its continuum bracket. n >= 2.
SharpConstantReport sharp_ratio(int n, int grid_size, double tolerance,
                                GameMethod method = GameMethod::kAuto);

// Sharp regret constant over D_N (support [0, 1]) and its bracket. n >= 2.
SharpConstantReport sharp_regret(int n, int grid_size, double tolerance,
                                 GameMethod method = GameMethod::kAuto);

struct Counterexample {
  std::size_t index = 0;  // position in the candidate list
  double ratio = 0.0;     // best single-threshold ratio found
  double regret = 0.0;    // smallest single-threshold regret found
};

struct Verification {
  bool ok = true;
  std::vector<Counterexample> counterexamples;
};

// Cross-checks a report against alternative distributions: no ratio may fall
// certifiably below bracket.lower (ratio kind) and no regret may exceed
// bracket.upper (difference kind, support in [0, 1]).
Verification verify_solution(const SharpConstantReport& report,
                             const std::vector<DiscreteDistribution>& candidates);

}  // namespace prophet

#endif  // PROPHET_GAME_HPP_
