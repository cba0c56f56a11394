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

#include "prophet/errors.hpp"
#include "prophet/kernel.hpp"

using namespace prophet;

namespace {

// Kernels in their min-form, independent of the branch formulas.
double min_form_r(double x, double y, int n) {
  if (x == y) return 1.0;
  const double ratio = x < 1.0 ? std::min(1.0, (1.0 - y) / (1.0 - x)) : 0.0;
  const double dy = 1.0 - std::pow(y, n);
  return (1.0 - std::pow(x, n - 1)) / dy * ratio + std::pow(x, n - 1) * (1.0 - y) / dy;
}

double min_form_a(double x, double y, int n) {
  const double ratio = x < 1.0 ? std::min(1.0, (1.0 - y) / (1.0 - x)) : 0.0;
  return 1.0 - std::pow(y, n) - (1.0 - std::pow(x, n - 1)) * ratio - std::pow(x, n - 1) * (1.0 - y);
}

}  // namespace

TEST_CASE("hand-evaluated kernel values") {
  CHECK(kernel_r(0.37, 0.37, 5) == 1.0);
  CHECK(kernel_r(0.5, 0.25, 2) == doctest::Approx(0.875 / 0.9375).epsilon(1e-15));
  CHECK(kernel_r(0.3, 0.0, 7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_r(1.0, 1.0, 4) == 1.0);
  CHECK(kernel_r(0.0, 1.0, 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(kernel_r(0.5, 1.0, 2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(kernel_a(0.5, 0.25, 2) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(kernel_a(0.4, 0.4, 6) == 0.0);
  CHECK(kernel_a(0.8, 0.0, 6) == 0.0);
  CHECK_THROWS_AS(kernel_r(0.1, 0.2, 1), InvalidArgument);
}

TEST_CASE("payoff matrices") {
  const auto r = payoff_matrix(KernelKind::kRatio, 2, 4);
  const auto a = payoff_matrix(KernelKind::kDifference, 2, 4);
  REQUIRE(r.entries.rows() == 3);
  CHECK(r.entries(1, 0) == doctest::Approx(0.875 / 0.9375).epsilon(1e-15));
  CHECK(a.entries(1, 0) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK_THROWS_AS(payoff_matrix(KernelKind::kRatio, 2, 2), InvalidArgument);

  for (int n : {2, 3, 7, 12}) {
    const int grid = 60;
    const auto mr = payoff_matrix(KernelKind::kRatio, n, grid);
    const auto ma = payoff_matrix(KernelKind::kDifference, n, grid);
    for (int i = 0; i < grid - 1; ++i) {
      CHECK(mr.entries(i, i) == 1.0);
      CHECK(ma.entries(i, i) == 0.0);
      for (int j = 0; j < grid - 1; ++j) {
        const double x = (i + 1.0) / grid, y = (j + 1.0) / grid;
        CHECK(std::abs(mr.entries(i, j) - min_form_r(x, y, n)) <= 1e-14 * std::max(1.0, mr.entries(i, j)));
        CHECK(std::abs(ma.entries(i, j) - min_form_a(x, y, n)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("kernels are positive on a fine grid") {
  for (int n = 2; n <= 12; ++n) {
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) {
        const double x = i / 199.0, y = j / 199.0;
        ok = ok && kernel_r(x, y, n) > 0.0 && kernel_a(x, y, n) >= 0.0;
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("branches meet on the diagonal") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int n : {2, 5, 10, 40}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const double y = unit(rng);
      for (double x : {y - 1e-9, y + 1e-9}) {
        CHECK(kernel_r(x, y, n) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(kernel_a(x, y, n)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("Lipschitz bounds") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {2, 5, 10}) {
    const double lip = lipschitz_a(n);
    int a_fail = 0, r_fail = 0;
    for (int rep = 0; rep < 100000; ++rep) {
      const double x = unit(rng), x2 = unit(rng), y = unit(rng);
      if (std::abs(kernel_a(x, y, n) - kernel_a(x2, y, n)) > lip * std::abs(x - x2) + 1e-12) ++a_fail;
      if (std::abs(kernel_a(y, x, n) - kernel_a(y, x2, n)) > lip * std::abs(x - x2) + 1e-12) ++a_fail;
      const double h = 1e-3 * unit(rng);
      const double eps = 1.0 - std::max(x, y) - h;
      if (eps > 0.0 && x - h >= 0.0) {
        const double bound = lipschitz_r(n, eps) * h + 1e-12;
        if (std::abs(kernel_r(x + h, y, n) - kernel_r(x, y, n)) > bound) ++r_fail;
        if (std::abs(kernel_r(x - h, y, n) - kernel_r(x, y, n)) > bound) ++r_fail;
      }
    }
    CHECK(a_fail == 0);
    CHECK(r_fail == 0);
  }
}

TEST_CASE("error bounds and constants") {
  CHECK(err_bound_diff(10, 2000) == doctest::Approx(0.00225).epsilon(1e-14));
  CHECK(err_bound_diff(2, 500) == doctest::Approx(1.0 / 1000));
  CHECK(err_bound_diff(10, 13000) == doctest::Approx(3.46e-4).epsilon(1e-3));
  CHECK(err_bound_ratio(10, 2000) == doctest::Approx(0.0078).epsilon(0.01));
  CHECK(err_bound_ratio(100, 13500) == doctest::Approx(0.0094).epsilon(0.01));
  CHECK(err_bound_ratio(4, 100) > 0.0);
  CHECK_THROWS_AS(err_bound_ratio(3, 100), InvalidArgument);

  const double sq = std::pow(1.0 - std::exp(-1.0), 2);
  CHECK(support_cutoff(10) == doctest::Approx(0.3404).epsilon(1e-3));
  CHECK(support_cutoff(4) == doctest::Approx(-std::log(1.0 - sq + 1.0 / 3.0)).epsilon(1e-14));
  CHECK(support_cutoff(4) == doctest::Approx(0.0683).epsilon(1e-2));
  CHECK(support_cutoff(1000000) == doctest::Approx(0.5102).epsilon(1e-3));
  CHECK_THROWS_AS(support_cutoff(3), InvalidArgument);

  CHECK(lipschitz_a(2) == 1.0);
  CHECK(lipschitz_a(10) == 9.0);
  CHECK(lipschitz_r(2, 0.5) == doctest::Approx(4.0 / 3.0));
  CHECK(lipschitz_r(10, support_cutoff(10) / 10) == doctest::Approx(30.5).epsilon(0.01));
  CHECK(lipschitz_r(6, 1.0 - 1e-12) == doctest::Approx(5.0));
  CHECK(one_minus_pow(1.0 - 1e-12, 3) == doctest::Approx(3e-12).epsilon(1e-9));
}
