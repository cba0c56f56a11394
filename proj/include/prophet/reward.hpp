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

#ifndef PROPHET_REWARD_HPP_
#define PROPHET_REWARD_HPP_

#include <cstddef>

#include "prophet/dist.hpp"

namespace prophet {

/**
 * Randomized single-threshold rule tau_p(theta): stop at the first
 * t <= n-1 with X_t > theta, or X_t == theta and an independent
 * Bernoulli(p) coin lands heads; otherwise take X_n.
 */
struct ThresholdRule {
  double theta = 0.0;
  double p = 0.0;

  // Throws InvalidArgument unless theta >= 0 and 0 <= p <= 1.
  void validate() const;
};

struct RuleEvaluation {
  double value = 0.0;   // V_n(tau_p(theta); F)
  double ratio = 1.0;   // value / M_n(F); 1 when M_n(F) == 0
  double regret = 0.0;  // M_n(F) - value
};

// Reward from the form with factor [1 - F_p^n(theta)] and the partial-mean
// term. Degenerates to the mean of F when F_p(theta) >= 1 - 1e-14.
double reward_v1(const DiscreteDistribution& dist, int n,
                 const ThresholdRule& rule);

// Reward from the form with factor [1 - F_p^{n-1}(theta)] and the terminal
// term F_p^{n-1}(theta) E X. Agrees with reward_v1 to rounding.
double reward_v2(const DiscreteDistribution& dist, int n,
                 const ThresholdRule& rule);

// The rule whose no-stop probability equals x: theta_x = F^{<-}(x) and
// p_x = (F(theta_x) - x) / Delta(theta_x) (0 when F(theta_x) == x).
ThresholdRule level_rule(const DiscreteDistribution& dist, double x);

// Reward of level_rule(F, x) as a linear functional of the quantile
// function, with weight (1 - x^{n-1}) min{1, (1-y)/(1-x)} + x^{n-1}(1-y).
double reward_by_level(const DiscreteDistribution& dist, int n, double x);

RuleEvaluation evaluate_rule(const DiscreteDistribution& dist, int n,
                             const ThresholdRule& rule);

enum class SearchMode {
  kGridExact,    // F in D_N: maximize over levels i/N, i = 1..N-1
  kLevelSearch,  // general F: adaptive level grid with a Lipschitz gap bound
};

struct OptimalRuleOptions {
  SearchMode mode = SearchMode::kLevelSearch;
  int grid_size = 0;           // N, required for kGridExact
  std::size_t resolution = 0;  // initial uniform levels; 0 means 10 * atoms
  double target_gap = 1e-10;   // stop refining once the value gap is below
  std::size_t max_evaluations = 200000;
};

struct OptimalRule {
  ThresholdRule rule;
  RuleEvaluation evaluation;
  double level = 0.0;
  // Certified bound on sup_x V(x) - evaluation.value; 0 for kGridExact.
  double value_gap = 0.0;
  // value_gap expressed on the ratio scale (value_gap / M_n).
  double ratio_gap = 0.0;
  std::size_t evaluations = 0;
};

// Best single-threshold rule. Requires n >= 2.
OptimalRule optimal_rule(const DiscreteDistribution& dist, int n,
                         const OptimalRuleOptions& options = {});

// theta = U(n) with p chosen so that F_p(theta) = 1 - 1/n.
ThresholdRule corollary1_rule(const DiscreteDistribution& dist, int n);

// 1 - (1 - 1/n)^n.
double corollary1_constant(int n);

struct GrowthBound {
  double lhs = 0.0;  // M_n
  double rhs = 0.0;  // (1 - lambda) M_{n+k} + lambda M_1
  double lambda = 0.0;
};

// Distribution-free growth bound on expected maxima,
// lambda_{n,k} = (1 - 1/(n+k))^{n-1}.
GrowthBound growth_bound_check(const DiscreteDistribution& dist, int n, int k);

struct SamuelCahnValues {
  double prophet = 0.0;      // M_n(F*)
  double stop_above_0 = 0.0; // E X_{tau_0(0)}
  double stop_above_a = 0.0; // E X_{tau_0(a)}
  double stop_above_1 = 0.0; // E X_{tau_0(1)}
};

// Three atoms 0, a, 1 with masses 1 - (b+c)/n, c/n, b/n.
DiscreteDistribution samuel_cahn_distribution(int n, double a, double b,
                                              double c);
SamuelCahnValues samuel_cahn_closed_forms(int n, double a, double b, double c);

// Two atoms (e-2)/(e-1) and n/(e-1) with masses 1 - 1/n^2 and 1/n^2.
DiscreteDistribution ehsani_distribution(int n);

}  // namespace prophet

#endif  // PROPHET_REWARD_HPP_
