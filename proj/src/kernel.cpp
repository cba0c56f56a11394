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

#include "prophet/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prophet/errors.hpp"

namespace prophet {
namespace {

void check_horizon(int n) {
  if (n < 2) throw InvalidArgument("kernel horizon n must be >= 2");
}

// sum_{k=0}^{n-1} t^k = (1 - t^n) / (1 - t).
double geometric_sum(double t, int n) {
  if (t >= 1.0) return n;
  return one_minus_pow(t, n) / (1.0 - t);
}

// (1 - e^{-1})^2
double squared_floor() {
  const double f = 1.0 - std::exp(-1.0);
  return f * f;
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::kRatio ? "ratio" : "difference";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "ratio" || name == "R") return KernelKind::kRatio;
  if (name == "difference" || name == "A") return KernelKind::kDifference;
  throw InvalidArgument("unknown kernel kind: " + std::string(name));
}

double one_minus_pow(double t, int n) {
  if (t <= 0.0) return 1.0;
  return -std::expm1(n * std::log(t));
}

double kernel_r(double x, double y, int n) {
  check_horizon(n);
  if (x == y) return 1.0;
  if (x > y) return (1.0 - std::pow(x, n - 1) * y) / one_minus_pow(y, n);
  // (1 - y) / (1 - y^n) * (1 - x^n) / (1 - x), finite at y = 1.
  return geometric_sum(x, n) / geometric_sum(y, n);
}

double kernel_a(double x, double y, int n) {
  check_horizon(n);
  if (x == y) return 0.0;
  if (x > y) return y * (std::pow(x, n - 1) - std::pow(y, n - 1));
  // sum_{k=1}^{n-1} (y^k - x^k) = S(y) - S(x), S(t) = t (1 - t^{n-1}) / (1 - t)
  const double sy = y * geometric_sum(y, n - 1);
  const double sx = x * geometric_sum(x, n - 1);
  return (1.0 - y) * (sy - sx);
}

PayoffMatrix payoff_matrix(KernelKind kind, int n, int grid_size) {
  check_horizon(n);
  if (grid_size < 3) throw InvalidArgument("payoff matrix needs N >= 3");
  PayoffMatrix m;
  m.kind = kind;
  m.n = n;
  m.grid_size = grid_size;
  const int size = grid_size - 1;
  m.entries.resize(size, size);
  const double h = 1.0 / grid_size;
  for (int j = 0; j < size; ++j) {
    const double y = (j + 1) * h;
    for (int i = 0; i < size; ++i) {
      const double x = (i + 1) * h;
      m.entries(i, j) =
          kind == KernelKind::kRatio ? kernel_r(x, y, n) : kernel_a(x, y, n);
    }
  }
  return m;
}

double err_bound_diff(int n, int grid_size) {
  check_horizon(n);
  if (grid_size < 1) throw InvalidArgument("grid size must be positive");
  return (n - 1) / (2.0 * grid_size);
}

double err_bound_ratio(int n, int grid_size) {
  if (n < 4) throw InvalidArgument("ratio error bound requires n >= 4");
  if (grid_size < 1) throw InvalidArgument("grid size must be positive");
  return (n - 1) / (2.0 * grid_size * (squared_floor() - 1.0 / (n - 1)));
}

double support_cutoff(int n) {
  if (n < 4) throw InvalidArgument("support cutoff requires n >= 4");
  return -std::log(1.0 - squared_floor() + 1.0 / (n - 1));
}

double lipschitz_a(int n) {
  check_horizon(n);
  return n - 1.0;
}

double lipschitz_r(int n, double eps) {
  check_horizon(n);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgument("lipschitz_r requires 0 < eps < 1");
  }
  return (n - 1.0) / one_minus_pow(1.0 - eps, n);
}

}  // namespace prophet
