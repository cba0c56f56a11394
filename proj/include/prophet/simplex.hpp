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

#ifndef PROPHET_SIMPLEX_HPP_
#define PROPHET_SIMPLEX_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace prophet {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct SimplexOptions {
  double eps = 1e-9;          // pricing and feasibility tolerance
  double pivot_tolerance = 1e-9;  // smallest admissible pivot element
  std::size_t max_pivots = 1000000;
  // Consecutive degenerate pivots tolerated under largest-coefficient
  // pricing before switching to Bland's rule.
  std::size_t bland_after = 50;
  // Always use Bland's rule for the entering variable.
  bool bland_only = false;
  // Recompute the final basic solution and duals from the original data.
  bool refine = true;
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;     // primal, size n
  std::vector<double> dual;  // one multiplier per row of A, size m
  std::size_t pivots = 0;
  std::size_t bland_pivots = 0;
};

/**
 * Dense tableau simplex for
 *
 *   maximize c^T x  subject to  A x <= b,  x >= 0.
 *
 * Rows with b_i < 0 trigger a phase one on a single artificial variable.
 * Pricing is largest-coefficient with a fallback to Bland's rule on
 * degenerate stalls, so the method cannot cycle. Outside Bland mode the
 * ratio test is a two-pass Harris test preferring large pivots; in Bland
 * mode ties go to the smallest basic index.
 */
LpResult solve_lp(const Eigen::MatrixXd& a, std::span<const double> b,
                  std::span<const double> c, const SimplexOptions& options = {});

}  // namespace prophet

#endif  // PROPHET_SIMPLEX_HPP_
