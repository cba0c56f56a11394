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

#ifndef PROPHET_INTERIOR_POINT_HPP_
#define PROPHET_INTERIOR_POINT_HPP_

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace prophet {

/**
 * Convex quadratic program over the nonnegative orthant:
 *
 *   minimize    1/2 x^T H x + c^T x
 *   subject to  G_d x >= h_d   (dense block)
 *               G_s x >= h_s   (sparse block)
 *               x >= 0
 *
 * An empty hessian means H = 0 (a linear program). Splitting the constraint
 * rows lets the normal matrix G^T D G be assembled in O(m_d n^2 + nnz).
 */
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd cost;
  Eigen::MatrixXd dense_rows;
  Eigen::VectorXd dense_rhs;
  Eigen::SparseMatrix<double> sparse_rows;
  Eigen::VectorXd sparse_rhs;
};

struct InteriorPointOptions {
  double tolerance = 1e-10;  // relative residuals and complementarity
  int max_iterations = 150;
};

struct InteriorPointResult {
  bool converged = false;
  int iterations = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd dual_dense;   // multipliers of G_d x >= h_d
  Eigen::VectorXd dual_sparse;  // multipliers of G_s x >= h_s
  Eigen::VectorXd dual_bounds;  // multipliers of x >= 0
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // max |G x - s - h|
  double dual_residual = 0.0;    // max |H x + c - G^T y - z|
};

// Mehrotra predictor-corrector primal-dual method with a dense Cholesky
// factorization of the normal matrix. Throws InvalidArgument on shape errors.
InteriorPointResult solve_qp(const QpProblem& problem,
                             const InteriorPointOptions& options = {});

}  // namespace prophet

#endif  // PROPHET_INTERIOR_POINT_HPP_
