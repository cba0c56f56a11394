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

#include "prophet/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prophet/errors.hpp"

namespace prophet {
namespace {

// Tableau layout (KACTL-style dictionary): rows 0..m-1 are constraints,
// row m the objective, row m+1 the phase-one objective. Column n belongs to
// the artificial variable (index -1), column n+1 holds the right-hand side.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, std::span<const double> b,
          std::span<const double> c, const SimplexOptions& options)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        width_(n_ + 2),
        options_(options),
        data_(static_cast<std::size_t>(m_ + 2) * width_, 0.0),
        basic_(m_),
        nonbasic_(n_ + 1) {
    for (int i = 0; i < m_; ++i) {
      double* row = row_ptr(i);
      for (int j = 0; j < n_; ++j) row[j] = a(i, j);
      row[n_] = -1.0;
      row[n_ + 1] = b[i];
      basic_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      at(m_, j) = -c[j];
    }
    nonbasic_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
  }

  LpResult solve() {
    LpResult result;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (rhs(i) < rhs(r)) r = i;
    }
    if (m_ > 0 && rhs(r) < -options_.eps) {
      pivot(r, n_);
      const LpStatus phase_one = run(2, result);
      if (phase_one == LpStatus::kIterationLimit) return finish(result, phase_one);
      if (phase_one != LpStatus::kOptimal || at(m_ + 1, n_ + 1) < -options_.eps) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j) {
          if (std::make_pair(at(i, j), nonbasic_[j]) <
              std::make_pair(at(i, s), nonbasic_[s])) {
            s = j;
          }
        }
        pivot(i, s);
        ++result.pivots;
      }
    }
    return finish(result, run(1, result));
  }

  // Recomputes x_B = B^{-1} b and y = B^{-T} c_B from the original data.
  void refine(const Eigen::MatrixXd& a, std::span<const double> b,
              std::span<const double> c, LpResult& result) const {
    if (m_ == 0) return;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m_, m_);
    Eigen::VectorXd cost(m_);
    for (int i = 0; i < m_; ++i) {
      const int k = basic_[i];
      if (k < 0) return;
      if (k < n_) {
        basis.col(i) = a.col(k);
        cost(i) = c[k];
      } else {
        basis(k - n_, i) = 1.0;
        cost(i) = 0.0;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    const Eigen::Map<const Eigen::VectorXd> rhs_vec(b.data(), m_);
    const Eigen::VectorXd xb = lu.solve(rhs_vec);
    const Eigen::VectorXd y = lu.transpose().solve(cost);
    if (!xb.allFinite() || !y.allFinite()) return;
    // Keep the refinement only if it stays (numerically) feasible.
    if (xb.minCoeff() < -1e-9 || y.minCoeff() < -1e-9) return;
    std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) x[basic_[i]] = std::max(0.0, xb(i));
    }
    result.x = std::move(x);
    for (int i = 0; i < m_; ++i) result.dual[i] = std::max(0.0, y(i));
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += c[j] * result.x[j];
    result.objective = obj;
  }

 private:
  double* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * width_; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + j]; }
  double rhs(int i) { return at(i, n_ + 1); }

  void pivot(int r, int s) {
    double* pr = row_ptr(r);
    const double inv = 1.0 / pr[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* pi = row_ptr(i);
      if (pi[s] != 0.0) {
        const double f = pi[s] * inv;
        for (int j = 0; j < width_; ++j) pi[j] -= pr[j] * f;
        pi[s] = -f;
      } else {
        pi[s] *= -inv;
      }
    }
    for (int j = 0; j < width_; ++j) pr[j] *= inv;
    pr[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // phase 1: real objective (row m), skip the artificial column.
  // phase 2: phase-one objective (row m+1).
  LpStatus run(int phase, LpResult& result) {
    const int obj = m_ + phase - 1;
    std::size_t degenerate_streak = 0;
    for (;;) {
      if (result.pivots >= options_.max_pivots) return LpStatus::kIterationLimit;
      const bool bland =
          options_.bland_only || degenerate_streak >= options_.bland_after;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        const double rc = at(obj, j);
        if (rc >= -options_.eps) continue;
        if (s == -1) {
          s = j;
        } else if (bland ? nonbasic_[j] < nonbasic_[s] : rc < at(obj, s)) {
          s = j;
        }
      }
      if (s == -1) return LpStatus::kOptimal;

      const double tol = options_.pivot_tolerance;
      int r = -1;
      double step = std::numeric_limits<double>::infinity();
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double coef = at(i, s);
          if (coef > tol) step = std::min(step, rhs(i) / coef);
        }
        if (!std::isfinite(step)) return LpStatus::kUnbounded;
        const double cutoff = step + options_.eps * (1.0 + std::abs(step));
        for (int i = 0; i < m_; ++i) {
          const double coef = at(i, s);
          if (coef <= tol || rhs(i) / coef > cutoff) continue;
          if (r == -1 || basic_[i] < basic_[r]) r = i;
        }
      } else {
        // Harris: bound the step with relaxed right-hand sides, then take
        // the largest pivot among rows blocking within that bound.
        double relaxed = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
          const double coef = at(i, s);
          if (coef > tol) relaxed = std::min(relaxed, (rhs(i) + options_.eps) / coef);
        }
        if (!std::isfinite(relaxed)) return LpStatus::kUnbounded;
        for (int i = 0; i < m_; ++i) {
          const double coef = at(i, s);
          if (coef <= tol || rhs(i) / coef > relaxed) continue;
          if (r == -1 || coef > at(r, s) ||
              (coef == at(r, s) && basic_[i] < basic_[r])) {
            r = i;
          }
        }
        step = rhs(r) / at(r, s);
      }
      if (rhs(r) < 0.0) at(r, n_ + 1) = 0.0;
      const bool degenerate = step <= options_.eps;
      pivot(r, s);
      ++result.pivots;
      if (bland) ++result.bland_pivots;
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
    }
  }

  LpResult& finish(LpResult& result, LpStatus status) {
    result.status = status;
    result.x.assign(static_cast<std::size_t>(n_), 0.0);
    result.dual.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && basic_[i] < n_) result.x[basic_[i]] = rhs(i);
    }
    for (int j = 0; j <= n_; ++j) {
      if (nonbasic_[j] >= n_) result.dual[nonbasic_[j] - n_] = at(m_, j);
    }
    result.objective = at(m_, n_ + 1);
    return result;
  }

  int m_, n_, width_;
  SimplexOptions options_;
  std::vector<double> data_;
  std::vector<int> basic_, nonbasic_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, std::span<const double> b,
                  std::span<const double> c, const SimplexOptions& options) {
  if (b.size() != static_cast<std::size_t>(a.rows()) ||
      c.size() != static_cast<std::size_t>(a.cols())) {
    throw InvalidArgument("solve_lp: dimension mismatch");
  }
  Tableau tableau(a, b, c, options);
  LpResult result = tableau.solve();
  if (result.status == LpStatus::kOptimal && options.refine) {
    tableau.refine(a, b, c, result);
  }
  return result;
}

}  // namespace prophet
