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

#ifndef PROPHET_CONSTRAINED_HPP_
#define PROPHET_CONSTRAINED_HPP_

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "prophet/dist.hpp"
#include "prophet/reward.hpp"

namespace prophet {

// Grid data shared by the constrained families, indices i, j = 1..N-1:
//   b_ij = coefficient of v_j in the reward of the level-i/N rule, which
//          stops above u_{i-1} (u_0 = 0);  d_j = 1 - (j/N)^n,
//   Q_ij = min(i, j)/N - ij/N^2  (so that Var F = v^T Q v on D_N).
struct VarianceProblem {
  int n = 0;
  int grid_size = 0;
  Eigen::MatrixXd q;
  Eigen::MatrixXd b;
  Eigen::VectorXd d;

  // Requires n >= 2, N >= 3.
  static VarianceProblem build(int n, int grid_size);
};

// Rewards b_i^T v of the grid rules; b_ij as in VarianceProblem.
Eigen::MatrixXd reward_coefficients(int n, int grid_size);

// Bounds q_lo <= u_i <= q_hi on the grid quantiles of a Pareto-like family.
struct ParetoProblem {
  int n = 0;
  int grid_size = 0;
  double p0 = 0.0;
  double p1 = 0.0;
  Eigen::VectorXd q_lo;  // (N/(N-i))^{1/p0}
  Eigen::VectorXd q_hi;  // (N/(N-i))^{1/p1}

  // Requires p0 > p1 > 1, n >= 2, N >= 3.
  static ParetoProblem build(int n, int grid_size, double p0, double p1);
};

enum class Family { kVariance, kPareto };
std::string_view to_string(Family family);

/**
 * Grid-level value of a constrained family with a two-sided certificate
 * lower <= optimum <= upper. There is no continuum bracket for these
 * families; the certificate only concerns the optimization over D_N.
 */
struct ConstrainedResult {
  Family family = Family::kVariance;
  int n = 0;
  int grid_size = 0;
  double sigma = 1.0;          // variance family
  double p0 = 0.0, p1 = 0.0;   // Pareto family
  double value = 0.0;          // attained by `increments`
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> increments;  // v_j = u_j - u_{j-1}, j = 1..N-1
  DiscreteDistribution lfd = DiscreteDistribution::point_mass(0.0);
  ThresholdRule rule;
  int threshold_index = 0;  // best response level i* (1-based)
  int iterations = 0;
};

// kappa_n * sigma: largest worst-case regret of grid rules over D_N members
// with variance at most sigma^2. value = lower is the regret attained by
// `increments`; upper comes from a Lagrangian dual bound. Throws
// SolverError when upper - lower > tol.
ConstrainedResult kappa(int n, int grid_size, double tol, double sigma = 1.0);

// Worst-case ratio over D_N members whose grid quantiles satisfy the
// Pareto-like bounds. value = upper is the ratio attained by `increments`.
ConstrainedResult pareto_ratio(int n, int grid_size, double p0, double p1,
                               double tol);

// Same program with arbitrary nondecreasing bounds; q_hi entries may be
// +infinity and q_lo entries 0 (which recovers the ratio game over D_N).
ConstrainedResult pareto_ratio_bounds(int n, int grid_size,
                                      std::span<const double> q_lo,
                                      std::span<const double> q_hi, double tol);

// E X^2 - (E X)^2.
double variance_of(const DiscreteDistribution& dist);

// v^T Q v for grid increments, without forming Q.
double grid_variance(std::span<const double> increments, int grid_size);

}  // namespace prophet

#endif  // PROPHET_CONSTRAINED_HPP_
