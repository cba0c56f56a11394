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

#include "prophet/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prophet/errors.hpp"
#include "prophet/interior_point.hpp"
#include "prophet/kernel.hpp"

namespace prophet {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIndexTieTolerance = 1e-9;

void check_sizes(int n, int grid_size) {
  if (n < 2) throw InvalidArgument("horizon n must be >= 2");
  if (grid_size < 3) throw InvalidArgument("grid size N must be >= 3");
}

void check_tolerance(double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
}

// (1 - x^n)/(1 - x) for x in [0, 1).
double geometric(double x, int n) { return one_minus_pow(x, n) / (1.0 - x); }

std::vector<double> to_vector(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

int first_within(const VectorXd& values, double target) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i) - target) <= kIndexTieTolerance) return static_cast<int>(i);
  }
  return 0;
}

// x^T (N tridiag(-1, 2, -1)) x, the inverse of Q applied as a quadratic form.
double inverse_q_form(const VectorXd& x, int grid_size) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s += 2.0 * x(i) * x(i);
    if (i + 1 < x.size()) s -= 2.0 * x(i) * x(i + 1);
  }
  return grid_size * s;
}

void finish_rule(ConstrainedResult& r) {
  r.lfd = QuantileIncrements(r.grid_size, r.increments).to_distribution();
  r.rule = level_rule(r.lfd, static_cast<double>(r.threshold_index) / r.grid_size);
}

}  // namespace

MatrixXd reward_coefficients(int n, int grid_size) {
  check_sizes(n, grid_size);
  const int m = grid_size - 1;
  MatrixXd b(m, m);
  for (int i = 1; i <= m; ++i) {
    const double x = static_cast<double>(i) / grid_size;
    const double top = std::pow(x, n - 1);
    const double below = geometric(x, n);
    for (int j = 1; j <= m; ++j) {
      const double y = static_cast<double>(j) / grid_size;
      b(i - 1, j - 1) = j <= i ? 1.0 - top * y : below * (1.0 - y);
    }
  }
  return b;
}

VarianceProblem VarianceProblem::build(int n, int grid_size) {
  check_sizes(n, grid_size);
  VarianceProblem p;
  p.n = n;
  p.grid_size = grid_size;
  const int m = grid_size - 1;
  const double big_n = grid_size;
  p.q.resize(m, m);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      p.q(i - 1, j - 1) = std::min(i, j) / big_n - (static_cast<double>(i) * j) / (big_n * big_n);
    }
  }
  p.b = reward_coefficients(n, grid_size);
  p.d.resize(m);
  for (int j = 1; j <= m; ++j) p.d(j - 1) = one_minus_pow(j / big_n, n);
  return p;
}

ParetoProblem ParetoProblem::build(int n, int grid_size, double p0, double p1) {
  check_sizes(n, grid_size);
  if (!(p1 > 1.0) || !(p0 > p1)) throw InvalidArgument("Pareto family needs p0 > p1 > 1");
  ParetoProblem p;
  p.n = n;
  p.grid_size = grid_size;
  p.p0 = p0;
  p.p1 = p1;
  const int m = grid_size - 1;
  p.q_lo.resize(m);
  p.q_hi.resize(m);
  for (int i = 1; i <= m; ++i) {
    const double base = static_cast<double>(grid_size) / (grid_size - i);
    p.q_lo(i - 1) = std::pow(base, 1.0 / p0);
    p.q_hi(i - 1) = std::pow(base, 1.0 / p1);
  }
  return p;
}

std::string_view to_string(Family family) {
  return family == Family::kVariance ? "variance" : "pareto";
}

double variance_of(const DiscreteDistribution& dist) {
  const double mean = dist.mean();
  double s = 0.0;
  for (const Atom& a : dist.atoms()) s += a.prob * (a.value - mean) * (a.value - mean);
  return s;
}

double grid_variance(std::span<const double> increments, int grid_size) {
  if (grid_size < 2 || increments.size() != static_cast<std::size_t>(grid_size - 1)) {
    throw InvalidArgument("grid_variance: need N - 1 increments");
  }
  // Atoms u_0 = 0, u_1, ..., u_{N-1}, each with mass 1/N.
  double u = 0.0, sum = 0.0, sum_sq = 0.0;
  for (double v : increments) {
    u += v;
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / grid_size;
  return std::max(0.0, sum_sq / grid_size - mean * mean);
}

ConstrainedResult kappa(int n, int grid_size, double tol, double sigma) {
  check_tolerance(tol);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be > 0");
  const VarianceProblem p = VarianceProblem::build(n, grid_size);
  const int m = grid_size - 1;

  // Regret of rule i on increments z is (d - b_i)^T z. By homogeneity the
  // best worst-case regret under z^T Q z <= sigma^2 is 1/sqrt(q*), where
  // q* = min z^T Q z / sigma^2 subject to (1 d^T - B) z >= 1, z >= 0.
  QpProblem qp;
  qp.hessian = (2.0 / (sigma * sigma)) * p.q;
  qp.cost = VectorXd::Zero(m);
  qp.dense_rows = (-p.b).rowwise() + p.d.transpose();
  qp.dense_rhs = VectorXd::Ones(m);
  const InteriorPointResult sol = solve_qp(qp);

  const VectorXd z = sol.x.cwiseMax(0.0);
  const double slack = (qp.dense_rows * z).minCoeff();
  const double quad = z.dot(p.q * z);
  if (!(slack > 0.0) || !(quad > 0.0)) {
    throw SolverError("kappa: interior point returned no usable primal point", kInf);
  }

  ConstrainedResult r;
  r.family = Family::kVariance;
  r.n = n;
  r.grid_size = grid_size;
  r.sigma = sigma;
  r.iterations = sol.iterations;
  const VectorXd scaled = (sigma / std::sqrt(quad)) * z;
  const VectorXd regrets = qp.dense_rows * scaled;
  r.value = regrets.minCoeff();
  r.lower = r.value;

  // Any alpha, beta >= 0 give q* >= (1^T alpha)^2 / (sigma^2 g^T Q^{-1} g)
  // with g = A^T alpha + beta.
  const VectorXd alpha = sol.dual_dense.cwiseMax(0.0);
  const VectorXd beta = sol.dual_bounds.cwiseMax(0.0);
  const VectorXd g = qp.dense_rows.transpose() * alpha + beta;
  const double mass = alpha.sum();
  r.upper = mass > 0.0 ? sigma * std::sqrt(inverse_q_form(g, grid_size)) / mass : kInf;

  r.increments = to_vector(scaled);
  r.threshold_index = first_within(regrets, r.value) + 1;
  finish_rule(r);
  if (!(r.upper - r.lower <= tol)) {
    throw SolverError("kappa: certificate gap " + std::to_string(r.upper - r.lower) +
                          " exceeds tolerance",
                      r.upper - r.lower);
  }
  return r;
}

ConstrainedResult pareto_ratio_bounds(int n, int grid_size, std::span<const double> q_lo,
                                      std::span<const double> q_hi, double tol) {
  check_sizes(n, grid_size);
  check_tolerance(tol);
  const int m = grid_size - 1;
  if (q_lo.size() != static_cast<std::size_t>(m) || q_hi.size() != static_cast<std::size_t>(m)) {
    throw InvalidArgument("pareto: bound vectors need N - 1 entries");
  }
  for (int i = 0; i < m; ++i) {
    if (!(q_lo[i] >= 0.0) || !(q_hi[i] >= q_lo[i]) || !std::isfinite(q_lo[i]) ||
        (i > 0 && (q_lo[i] < q_lo[i - 1] || q_hi[i] < q_hi[i - 1]))) {
      throw InvalidArgument("pareto: bounds must satisfy 0 <= q_lo <= q_hi, nondecreasing");
    }
  }

  // Quantile-space form: b_i^T v = bt_i^T u and d^T v = dt^T u with
  // bt_ik = b_ik - b_i,k+1 and dt_k = d_k - d_k+1 (b_i,N = d_N = 0).
  const VarianceProblem base = VarianceProblem::build(n, grid_size);
  MatrixXd bt = base.b;
  bt.leftCols(m - 1) -= base.b.rightCols(m - 1);
  VectorXd dt = base.d;
  dt.head(m - 1) -= base.d.tail(m - 1);

  // Charnes-Cooper: x = (w, s, rho) with w = s u. minimize rho subject to
  //   rho - bt_i^T w >= 0,  dt^T w >= 1,
  //   w_i - q_lo,i s >= 0,  q_hi,i s - w_i >= 0,  w_i - w_{i-1} >= 0.
  const int nv = m + 2, s_col = m, rho_col = m + 1;
  QpProblem qp;
  qp.cost = VectorXd::Zero(nv);
  qp.cost(rho_col) = 1.0;
  qp.dense_rows = MatrixXd::Zero(m + 1, nv);
  qp.dense_rows.block(0, 0, m, m) = -bt;
  qp.dense_rows.block(0, rho_col, m, 1).setOnes();
  qp.dense_rows.block(m, 0, 1, m) = dt.transpose();
  qp.dense_rhs = VectorXd::Zero(m + 1);
  qp.dense_rhs(m) = 1.0;

  std::vector<Eigen::Triplet<double>> triplets;
  int row = 0;
  bool any_finite_hi = false;
  for (int i = 0; i < m; ++i) {
    if (q_lo[i] > 0.0) {
      triplets.emplace_back(row, i, 1.0);
      triplets.emplace_back(row, s_col, -q_lo[i]);
      ++row;
    }
    if (std::isfinite(q_hi[i])) {
      any_finite_hi = true;
      triplets.emplace_back(row, s_col, q_hi[i]);
      triplets.emplace_back(row, i, -1.0);
      ++row;
    }
    if (i > 0) {
      triplets.emplace_back(row, i, 1.0);
      triplets.emplace_back(row, i - 1, -1.0);
      ++row;
    }
  }
  qp.sparse_rows.resize(row, nv);
  qp.sparse_rows.setFromTriplets(triplets.begin(), triplets.end());
  qp.sparse_rhs = VectorXd::Zero(row);
  const InteriorPointResult sol = solve_qp(qp);

  // Primal side: repair to an exactly feasible u and evaluate its ratio.
  const double s = sol.x(s_col);
  VectorXd u = sol.x.head(m);
  if (any_finite_hi || q_lo[m - 1] > 0.0) {
    if (!(s > 0.0)) throw SolverError("pareto: degenerate scale variable", kInf);
    u /= s;
  }
  double running = 0.0;
  for (int i = 0; i < m; ++i) {
    running = std::max(running, std::clamp(u(i), q_lo[i], q_hi[i]));
    u(i) = running;
  }
  const double denom = dt.dot(u);
  if (!(denom > 0.0)) throw SolverError("pareto: repaired point has zero prophet value", kInf);
  const VectorXd ratios = bt * u / denom;

  ConstrainedResult r;
  r.family = Family::kPareto;
  r.n = n;
  r.grid_size = grid_size;
  r.iterations = sol.iterations;
  r.value = ratios.maxCoeff();
  r.upper = r.value;

  // Dual side: some optimum has dt^T w = 1 and lies in the box
  // rho <= 1, s <= s_max, w_k <= min(q_hi,k s_max, 1/d_k), so for any
  // y >= 0, rho* >= h^T y + sum_k box_k min(0, (c - G^T y)_k).
  double s_max = 0.0;
  if (any_finite_hi) {
    for (int k = 0; k < m; ++k) {
      if (std::isfinite(q_hi[k])) s_max = std::max(s_max, 1.0 / (base.d(k) * q_hi[k]));
    }
  }
  Eigen::Map<const VectorXd> lo_map(q_lo.data(), m);
  const double lo_mass = dt.dot(lo_map);
  if (lo_mass > 0.0) s_max = std::min(any_finite_hi ? s_max : kInf, 1.0 / lo_mass);
  VectorXd box(nv);
  for (int k = 0; k < m; ++k) {
    box(k) = 1.0 / base.d(k);
    if (std::isfinite(q_hi[k])) box(k) = std::min(box(k), q_hi[k] * s_max);
  }
  box(s_col) = s_max;
  box(rho_col) = 1.0;
  const VectorXd yd = sol.dual_dense.cwiseMax(0.0);
  const VectorXd ys = sol.dual_sparse.cwiseMax(0.0);
  VectorXd reduced = qp.cost - qp.dense_rows.transpose() * yd;
  if (row > 0) reduced -= qp.sparse_rows.transpose() * ys;
  double lower = qp.dense_rhs.dot(yd);
  for (int k = 0; k < nv; ++k) {
    if (reduced(k) < 0.0) lower += box(k) * reduced(k);
  }
  r.lower = std::min(lower, r.upper);

  VectorXd v = u;
  v.tail(m - 1) -= u.head(m - 1);
  r.increments = to_vector(v.cwiseMax(0.0));
  r.threshold_index = first_within(ratios, r.value) + 1;
  finish_rule(r);
  if (!(r.upper - r.lower <= tol)) {
    throw SolverError("pareto: certificate gap " + std::to_string(r.upper - r.lower) +
                          " exceeds tolerance",
                      r.upper - r.lower);
  }
  return r;
}

ConstrainedResult pareto_ratio(int n, int grid_size, double p0, double p1, double tol) {
  const ParetoProblem p = ParetoProblem::build(n, grid_size, p0, p1);
  ConstrainedResult r = pareto_ratio_bounds(
      n, grid_size, std::span<const double>(p.q_lo.data(), p.q_lo.size()),
      std::span<const double>(p.q_hi.data(), p.q_hi.size()), tol);
  r.p0 = p0;
  r.p1 = p1;
  return r;
}

}  // namespace prophet
