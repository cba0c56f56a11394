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

#include "prophet/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "prophet/errors.hpp"

namespace prophet {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Largest alpha in (0, 1] keeping v + alpha dv >= 0.
double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

class Solver {
 public:
  explicit Solver(const QpProblem& p) : p_(p) {
    n_ = p.cost.size();
    md_ = p.dense_rows.rows();
    ms_ = p.sparse_rows.rows();
    has_hessian_ = p.hessian.size() > 0;
    if ((md_ > 0 && p.dense_rows.cols() != n_) || p.dense_rhs.size() != md_ ||
        (ms_ > 0 && p.sparse_rows.cols() != n_) || p.sparse_rhs.size() != ms_ ||
        (has_hessian_ && (p.hessian.rows() != n_ || p.hessian.cols() != n_))) {
      throw InvalidArgument("solve_qp: inconsistent problem dimensions");
    }
  }

  InteriorPointResult run(const InteriorPointOptions& options) {
    x_ = VectorXd::Ones(n_);
    z_ = VectorXd::Ones(n_);
    sd_ = VectorXd::Ones(md_);
    yd_ = VectorXd::Ones(md_);
    ss_ = VectorXd::Ones(ms_);
    ys_ = VectorXd::Ones(ms_);

    const double scale_h =
        1.0 + std::max(p_.dense_rhs.size() ? p_.dense_rhs.lpNorm<Eigen::Infinity>() : 0.0,
                       p_.sparse_rhs.size() ? p_.sparse_rhs.lpNorm<Eigen::Infinity>() : 0.0);
    const double scale_c = 1.0 + (n_ ? p_.cost.lpNorm<Eigen::Infinity>() : 0.0);
    const double count = static_cast<double>(n_ + md_ + ms_);

    InteriorPointResult result;
    // Near the optimum rounding in the normal equations can make later
    // iterates worse; the iterate with the smallest merit is returned.
    double best_merit = std::numeric_limits<double>::infinity();
    VectorXd bx, bz, bsd, byd, bss, bys;
    int since_best = 0;
    for (int iter = 0; iter <= options.max_iterations; ++iter) {
      residuals();
      const double mu = complementarity() / count;
      const double pobj = primal_objective();
      result.iterations = iter;
      const double rp = primal_residual_norm();
      const double rd = rd_.size() ? rd_.lpNorm<Eigen::Infinity>() : 0.0;
      const double merit = std::max({rp / scale_h, rd / scale_c,
                                     complementarity() / (1.0 + std::abs(pobj))});
      if (std::isfinite(merit) && merit < best_merit) {
        best_merit = merit;
        bx = x_, bz = z_, bsd = sd_, byd = yd_, bss = ss_, bys = ys_;
        since_best = 0;
      } else if (++since_best >= 8) {
        break;
      }
      if (merit <= options.tolerance) {
        result.converged = true;
        break;
      }
      if (iter == options.max_iterations || !(mu > 0.0) || !std::isfinite(mu)) break;

      const VectorXd x0 = x_, z0 = z_, sd0 = sd_, yd0 = yd_, ss0 = ss_, ys0 = ys_;
      factor();
      // Predictor (affine scaling) direction.
      VectorXd rxz = -(x_.array() * z_.array()).matrix();
      VectorXd rsd = -(sd_.array() * yd_.array()).matrix();
      VectorXd rss = -(ss_.array() * ys_.array()).matrix();
      Direction aff = direction(rxz, rsd, rss);
      const double ap = std::min(max_step(x_, aff.dx),
                                 std::min(max_step(sd_, aff.dsd), max_step(ss_, aff.dss)));
      const double ad = std::min(max_step(z_, aff.dz),
                                 std::min(max_step(yd_, aff.dyd), max_step(ys_, aff.dys)));
      const double alpha_aff = std::min(ap, ad);
      const double mu_aff =
          ((x_ + alpha_aff * aff.dx).dot(z_ + alpha_aff * aff.dz) +
           (sd_ + alpha_aff * aff.dsd).dot(yd_ + alpha_aff * aff.dyd) +
           (ss_ + alpha_aff * aff.dss).dot(ys_ + alpha_aff * aff.dys)) /
          count;
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

      // Corrector with centering.
      rxz.array() += -aff.dx.array() * aff.dz.array() + sigma * mu;
      rsd.array() += -aff.dsd.array() * aff.dyd.array() + sigma * mu;
      rss.array() += -aff.dss.array() * aff.dys.array() + sigma * mu;
      Direction d = direction(rxz, rsd, rss);
      double step_p = std::min(max_step(x_, d.dx),
                               std::min(max_step(sd_, d.dsd), max_step(ss_, d.dss)));
      double step_d = std::min(max_step(z_, d.dz),
                               std::min(max_step(yd_, d.dyd), max_step(ys_, d.dys)));
      step_p = std::min(1.0, 0.995 * step_p);
      step_d = std::min(1.0, 0.995 * step_d);
      // The quadratic term couples primal and dual feasibility.
      if (has_hessian_) step_p = step_d = std::min(step_p, step_d);
      x_ += step_p * d.dx;
      sd_ += step_p * d.dsd;
      ss_ += step_p * d.dss;
      z_ += step_d * d.dz;
      yd_ += step_d * d.dyd;
      ys_ += step_d * d.dys;
      // Rounding can break the iteration near the solution; keep the last
      // finite iterate.
      if (!x_.allFinite() || !z_.allFinite() || !sd_.allFinite() || !yd_.allFinite() ||
          !ss_.allFinite() || !ys_.allFinite()) {
        x_ = x0, z_ = z0, sd_ = sd0, yd_ = yd0, ss_ = ss0, ys_ = ys0;
        break;
      }
    }

    if (best_merit < std::numeric_limits<double>::infinity()) {
      x_ = bx, z_ = bz, sd_ = bsd, yd_ = byd, ss_ = bss, ys_ = bys;
    }
    residuals();
    result.x = x_;
    result.dual_dense = yd_;
    result.dual_sparse = ys_;
    result.dual_bounds = z_;
    result.primal_objective = primal_objective();
    result.dual_objective = dual_objective();
    result.primal_residual = primal_residual_norm();
    result.dual_residual = rd_.size() ? rd_.lpNorm<Eigen::Infinity>() : 0.0;
    return result;
  }

 private:
  struct Direction {
    VectorXd dx, dz, dsd, dyd, dss, dys;
  };

  VectorXd hessian_times(const VectorXd& v) const {
    return has_hessian_ ? VectorXd(p_.hessian * v) : VectorXd::Zero(n_);
  }

  VectorXd constraint_transpose_times(const VectorXd& vd, const VectorXd& vs) const {
    VectorXd out = VectorXd::Zero(n_);
    if (md_ > 0) out.noalias() += p_.dense_rows.transpose() * vd;
    if (ms_ > 0) out += p_.sparse_rows.transpose() * vs;
    return out;
  }

  void residuals() {
    rd_ = hessian_times(x_) + p_.cost - constraint_transpose_times(yd_, ys_) - z_;
    rpd_ = md_ > 0 ? VectorXd(p_.dense_rows * x_ - sd_ - p_.dense_rhs) : VectorXd();
    rps_ = ms_ > 0 ? VectorXd(p_.sparse_rows * x_ - ss_ - p_.sparse_rhs) : VectorXd();
  }

  double primal_residual_norm() const {
    double r = 0.0;
    if (md_ > 0) r = std::max(r, rpd_.lpNorm<Eigen::Infinity>());
    if (ms_ > 0) r = std::max(r, rps_.lpNorm<Eigen::Infinity>());
    return r;
  }

  double complementarity() const {
    return x_.dot(z_) + sd_.dot(yd_) + ss_.dot(ys_);
  }

  double primal_objective() const {
    return 0.5 * x_.dot(hessian_times(x_)) + p_.cost.dot(x_);
  }

  double dual_objective() const {
    double out = -0.5 * x_.dot(hessian_times(x_));
    if (md_ > 0) out += p_.dense_rhs.dot(yd_);
    if (ms_ > 0) out += p_.sparse_rhs.dot(ys_);
    return out;
  }

  // Normal matrix H + X^{-1} Z + G^T S^{-1} Y G, lower triangle.
  void factor() {
    normal_ = has_hessian_ ? p_.hessian : MatrixXd::Zero(n_, n_);
    normal_.diagonal().array() += z_.array() / x_.array();
    if (md_ > 0) {
      const VectorXd w = (yd_.array() / sd_.array()).sqrt();
      const MatrixXd scaled = w.asDiagonal() * p_.dense_rows;
      normal_.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    }
    if (ms_ > 0) {
      const VectorXd w = ys_.array() / ss_.array();
      const Eigen::SparseMatrix<double> gtdg =
          Eigen::SparseMatrix<double>(p_.sparse_rows.transpose()) * w.asDiagonal() *
          p_.sparse_rows;
      for (int k = 0; k < gtdg.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(gtdg, k); it; ++it) {
          if (it.row() >= it.col()) normal_(it.row(), it.col()) += it.value();
        }
      }
    }
    double shift = 0.0;
    const double base = 1e-14 * (1.0 + normal_.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      llt_.compute(normal_);
      if (llt_.info() == Eigen::Success) return;
      shift = shift == 0.0 ? base : shift * 100.0;
      normal_.diagonal().array() += shift;
    }
    throw SolverError("interior point: normal matrix is not positive definite",
                      std::numeric_limits<double>::infinity());
  }

  Direction direction(const VectorXd& rxz, const VectorXd& rsd, const VectorXd& rss) {
    // rhs = -r_d + G^T S^{-1} (r_sy - Y r_p) + X^{-1} r_xz
    VectorXd td, ts;
    if (md_ > 0) td = (rsd.array() - yd_.array() * rpd_.array()) / sd_.array();
    if (ms_ > 0) ts = (rss.array() - ys_.array() * rps_.array()) / ss_.array();
    VectorXd rhs = -rd_ + constraint_transpose_times(td, ts);
    rhs.array() += rxz.array() / x_.array();

    Direction d;
    d.dx = llt_.solve(rhs);
    if (md_ > 0) {
      d.dsd = p_.dense_rows * d.dx + rpd_;
      d.dyd = (rsd.array() - yd_.array() * d.dsd.array()) / sd_.array();
    } else {
      d.dsd = d.dyd = VectorXd();
    }
    if (ms_ > 0) {
      d.dss = p_.sparse_rows * d.dx + rps_;
      d.dys = (rss.array() - ys_.array() * d.dss.array()) / ss_.array();
    } else {
      d.dss = d.dys = VectorXd();
    }
    d.dz = (rxz.array() - z_.array() * d.dx.array()) / x_.array();
    return d;
  }

  const QpProblem& p_;
  Eigen::Index n_ = 0, md_ = 0, ms_ = 0;
  bool has_hessian_ = false;
  VectorXd x_, z_, sd_, yd_, ss_, ys_;
  VectorXd rd_, rpd_, rps_;
  MatrixXd normal_;
  Eigen::LLT<MatrixXd, Eigen::Lower> llt_;
};

}  // namespace

InteriorPointResult solve_qp(const QpProblem& problem,
                             const InteriorPointOptions& options) {
  Solver solver(problem);
  return solver.run(options);
}

}  // namespace prophet
