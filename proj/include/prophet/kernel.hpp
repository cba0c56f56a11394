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

#ifndef PROPHET_KERNEL_HPP_
#define PROPHET_KERNEL_HPP_

#include <string_view>

#include <Eigen/Dense>

namespace prophet {

enum class KernelKind { kRatio, kDifference };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// Ratio kernel R(x, y) on the unit square. Diagonal is exactly 1, including
// the discontinuity point (1, 1).
double kernel_r(double x, double y, int n);

// Difference kernel A(x, y). Diagonal is exactly 0.
double kernel_a(double x, double y, int n);

/**
 * Payoff matrix of the discretized game: entry (i-1, j-1) is the kernel at
 * (i/N, j/N), i, j = 1..N-1. Rows belong to the stopper (level of the
 * threshold), columns to the adversary (quantile jump location).
 */
struct PayoffMatrix {
  KernelKind kind = KernelKind::kRatio;
  int n = 0;
  int grid_size = 0;
  Eigen::MatrixXd entries;
};

// Requires n >= 2 and N >= 3.
PayoffMatrix payoff_matrix(KernelKind kind, int n, int grid_size);

// (n - 1) / (2N): distance from the difference-game value to the continuum.
double err_bound_diff(int n, int grid_size);

// (n - 1) / (2N [(1 - e^{-1})^2 - 1/(n-1)]), n >= 4.
double err_bound_ratio(int n, int grid_size);

// c_n = -ln{1 - (1 - e^{-1})^2 + 1/(n-1)}, n >= 4. The optimal stopper
// strategy of the ratio game puts no mass on levels in [1 - c_n/n, 1].
double support_cutoff(int n);

// Lipschitz constant of A in either argument.
double lipschitz_a(int n);

// Lipschitz constant of R in either argument for x in [0, 1 - eps].
double lipschitz_r(int n, double eps);

// 1 - t^n, accurate for t near 1.
double one_minus_pow(double t, int n);

}  // namespace prophet

#endif  // PROPHET_KERNEL_HPP_
