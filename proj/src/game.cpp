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

#include "prophet/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prophet/errors.hpp"
#include "prophet/simplex.hpp"

namespace prophet {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// mu entries below this are treated as solver noise before reconstruction.
constexpr double kMicroAtom = 1e-12;
// Rows within this of the best response count as tied for i*.
constexpr double kIndexTieTolerance = 1e-9;

std::vector<double> to_vector(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> normalized(std::vector<double> v) {
  for (double& x : v) x = std::max(x, 0.0);
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total > 0.0) {
    for (double& x : v) x /= total;
  }
  return v;
}

std::vector<double> drop_micro_atoms(std::vector<double> mu) {
  for (double& m : mu) {
    if (m < kMicroAtom) m = 0.0;
  }
  return normalized(std::move(mu));
}

// min_mu max_i (M mu)_i via  max 1^T x  s.t.  (M + shift) x <= 1, x >= 0.
void solve_minmax_simplex(const MatrixXd& m, GameSolution& out) {
  const double shift = 1.0 - m.minCoeff();
  const MatrixXd positive = m.array() + shift;
  const std::vector<double> ones(static_cast<std::size_t>(m.rows()), 1.0);
  const std::vector<double> costs(static_cast<std::size_t>(m.cols()), 1.0);
  const LpResult lp = solve_lp(positive, ones, costs);
  out.iterations = lp.pivots;
  if (lp.status != LpStatus::kOptimal) {
    throw SolverError("simplex did not reach an optimal basis",
                      std::numeric_limits<double>::infinity());
  }
  out.mu = normalized(lp.x);
  out.lambda = normalized(lp.dual);
}

// Entropic mirror-prox on min_mu max_lambda lambda^T M mu. Keeps the best
// averaged pair seen; returns its certificate gap.
double solve_minmax_iterative(const MatrixXd& m, const GameOptions& options,
                              GameSolution& out) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  const double range = std::max(m.maxCoeff() - m.minCoeff(), 1e-300);
  const double eta = 1.0 / range;

  auto softmax = [](const VectorXd& logits) {
    VectorXd w = (logits.array() - logits.maxCoeff()).exp().matrix();
    return VectorXd(w / w.sum());
  };

  VectorXd log_lambda = VectorXd::Zero(rows), log_mu = VectorXd::Zero(cols);
  VectorXd avg_lambda = VectorXd::Zero(rows), avg_mu = VectorXd::Zero(cols);
  double best_gap = std::numeric_limits<double>::infinity();
  std::size_t check_every = 1;
  std::size_t iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const VectorXd lambda = softmax(log_lambda), mu = softmax(log_mu);
    const VectorXd half_log_lambda = log_lambda + eta * (m * mu);
    const VectorXd half_log_mu = log_mu - eta * (m.transpose() * lambda);
    const VectorXd half_lambda = softmax(half_log_lambda);
    const VectorXd half_mu = softmax(half_log_mu);
    log_lambda += eta * (m * half_mu);
    log_mu -= eta * (m.transpose() * half_lambda);
    log_lambda.array() -= log_lambda.maxCoeff();
    log_mu.array() -= log_mu.maxCoeff();
    avg_lambda += half_lambda;
    avg_mu += half_mu;

    if ((iter + 1) % check_every == 0) {
      const VectorXd l = avg_lambda / avg_lambda.sum();
      const VectorXd u = avg_mu / avg_mu.sum();
      const double gap = (m * u).maxCoeff() - (m.transpose() * l).minCoeff();
      if (gap < best_gap) {
        best_gap = gap;
        out.lambda = to_vector(l);
        out.mu = to_vector(u);
      }
      if (best_gap <= options.tolerance) {
        ++iter;
        break;
      }
      check_every = std::min<std::size_t>(check_every * 2, 64);
    }
  }
  out.iterations = iter;
  return best_gap;
}

std::size_t best_response_index(const VectorXd& payoffs, bool maximize) {
  const double target = maximize ? payoffs.maxCoeff() : payoffs.minCoeff();
  for (Eigen::Index i = 0; i < payoffs.size(); ++i) {
    if (std::abs(payoffs(i) - target) <= kIndexTieTolerance) {
      return static_cast<std::size_t>(i);
    }
  }
  return 0;
}

void check_game_tolerance(double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("game tolerance must be > 0");
}

}  // namespace

GameCertificate certify(const MatrixXd& payoff, GameSense sense,
                        const std::vector<double>& lambda,
                        const std::vector<double>& mu) {
  if (lambda.size() != static_cast<std::size_t>(payoff.rows()) ||
      mu.size() != static_cast<std::size_t>(payoff.cols())) {
    throw InvalidArgument("certify: strategy sizes do not match the matrix");
  }
  const VectorXd row_payoffs = payoff * to_eigen(mu);
  const VectorXd col_payoffs = payoff.transpose() * to_eigen(lambda);
  GameCertificate c;
  if (sense == GameSense::kMinMax) {
    c.upper = row_payoffs.maxCoeff();
    c.lower = col_payoffs.minCoeff();
  } else {
    c.upper = col_payoffs.maxCoeff();
    c.lower = row_payoffs.minCoeff();
  }
  return c;
}

GameSolution solve_game(const MatrixXd& payoff, GameSense sense,
                        const GameOptions& options) {
  check_game_tolerance(options.tolerance);
  if (payoff.rows() < 1 || payoff.cols() < 1) {
    throw InvalidArgument("solve_game: empty payoff matrix");
  }
  if (!payoff.allFinite()) throw InvalidArgument("solve_game: non-finite payoff");

  // Everything is solved as min_mu max_lambda on +M or -M.
  const MatrixXd minmax = sense == GameSense::kMinMax ? payoff : MatrixXd(-payoff);
  GameMethod method = options.method;
  if (method == GameMethod::kAuto) {
    method = std::max(payoff.rows(), payoff.cols()) <= kSimplexLimit
                 ? GameMethod::kSimplex
                 : GameMethod::kIterative;
  }

  GameSolution out;
  out.method = method;
  if (method == GameMethod::kSimplex) {
    solve_minmax_simplex(minmax, out);
  } else {
    solve_minmax_iterative(minmax, options, out);
  }

  const GameCertificate cert = certify(payoff, sense, out.lambda, out.mu);
  out.upper = cert.upper;
  out.lower = cert.lower;
  out.gap = std::max(0.0, cert.upper - cert.lower);
  out.value = sense == GameSense::kMinMax ? cert.upper : cert.lower;
  if (out.gap > options.tolerance) {
    throw SolverError("game solver stopped with certificate gap " +
                          std::to_string(out.gap) + " > tolerance " +
                          std::to_string(options.tolerance),
                      out.gap);
  }
  return out;
}

double default_game_tolerance(int grid_size) {
  return grid_size <= 2000 ? 1e-7 : 1e-5;
}

SharpConstantReport sharp_ratio(int n, int grid_size, double tolerance,
                                GameMethod method) {
  const PayoffMatrix matrix = payoff_matrix(KernelKind::kRatio, n, grid_size);
  GameOptions options;
  options.tolerance = tolerance;
  options.method = method;

  SharpConstantReport report;
  report.kind = KernelKind::kRatio;
  report.n = n;
  report.grid_size = grid_size;
  report.solution = solve_game(matrix.entries, GameSense::kMinMax, options);
  report.value = report.solution.value;
  report.gap = report.solution.gap;

  const std::vector<double> mu = drop_micro_atoms(report.solution.mu);
  report.lfd = lfd_from_mu_ratio(mu, n, grid_size);
  const VectorXd payoffs = matrix.entries * to_eigen(mu);
  report.threshold_index = static_cast<int>(best_response_index(payoffs, true)) + 1;
  report.rule = level_rule(report.lfd,
                           static_cast<double>(report.threshold_index) / grid_size);

  const double floor = corollary1_constant(n);
  if (n >= 4) {
    const double err = err_bound_ratio(n, grid_size);
    report.bracket.lower = std::max(floor, report.value - err - report.gap);
    report.bracket.upper = report.value + err + report.gap;
  } else {
    report.certified_bracket = false;
    report.bracket.lower = floor;
    report.bracket.upper = std::max(floor, report.value + report.gap);
  }
  return report;
}

SharpConstantReport sharp_regret(int n, int grid_size, double tolerance,
                                 GameMethod method) {
  const PayoffMatrix matrix = payoff_matrix(KernelKind::kDifference, n, grid_size);
  GameOptions options;
  options.tolerance = tolerance;
  options.method = method;

  SharpConstantReport report;
  report.kind = KernelKind::kDifference;
  report.n = n;
  report.grid_size = grid_size;
  report.solution = solve_game(matrix.entries, GameSense::kMaxMin, options);
  report.value = report.solution.value;
  report.gap = report.solution.gap;

  const std::vector<double> mu = drop_micro_atoms(report.solution.mu);
  report.lfd = lfd_from_mu_diff(mu, grid_size);
  const VectorXd payoffs = matrix.entries * to_eigen(mu);
  report.threshold_index = static_cast<int>(best_response_index(payoffs, false)) + 1;
  report.rule = level_rule(report.lfd,
                           static_cast<double>(report.threshold_index) / grid_size);

  const double err = err_bound_diff(n, grid_size);
  report.bracket.lower = report.value - err - report.gap;
  report.bracket.upper = report.value + err + report.gap;
  return report;
}

Verification verify_solution(const SharpConstantReport& report,
                             const std::vector<DiscreteDistribution>& candidates) {
  constexpr double kSlack = 1e-12;
  Verification out;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const DiscreteDistribution& dist = candidates[k];
    if (report.kind == KernelKind::kDifference && dist.max_value() > 1.0) {
      throw InvalidArgument("regret verification needs support in [0, 1]");
    }
    const OptimalRule best = optimal_rule(dist, report.n);
    Counterexample c;
    c.index = k;
    c.ratio = best.evaluation.ratio;
    c.regret = best.evaluation.regret;
    const bool violates =
        report.kind == KernelKind::kRatio
            ? best.evaluation.ratio + best.ratio_gap < report.bracket.lower - kSlack
            : best.evaluation.regret - best.value_gap > report.bracket.upper + kSlack;
    if (violates) out.counterexamples.push_back(c);
  }
  out.ok = out.counterexamples.empty();
  return out;
}

}  // namespace prophet
