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

#ifndef PROPHET_DIST_HPP_
#define PROPHET_DIST_HPP_

#include <span>
#include <vector>

namespace prophet {

// Absolute tolerance on the total mass of a distribution.
inline constexpr double kProbTolerance = 1e-12;

struct Atom {
  double value;
  double prob;
};

/**
 * Finite atomic distribution on [0, inf).
 *
 * Atoms are stored sorted strictly ascending by value. The cumulative
 * probabilities are cached; the last one is pinned to exactly 1 so that
 * quantile(1) always lands on the largest atom.
 *
 * Instances are immutable after construction and safe to share.
 */
class DiscreteDistribution {
 public:
  // Requires strictly ascending values >= 0, probs > 0 summing to 1 within
  // kProbTolerance. Throws InvalidArgument otherwise (no renormalization).
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  // Sorts, merges equal values (summing their probabilities), then validates.
  static DiscreteDistribution merged(std::vector<Atom> atoms);

  // Equal-mass distribution 1/k on each listed value (duplicates merged).
  static DiscreteDistribution equal_mass(std::span<const double> values);

  static DiscreteDistribution point_mass(double value);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double min_value() const { return atoms_.front().value; }
  double max_value() const { return atoms_.back().value; }

  // F(x): mass at or below x.
  double cdf(double x) const;
  // F(x-): mass strictly below x.
  double cdf_left(double x) const;
  // Delta(x) = F(x) - F(x-).
  double mass_at(double x) const;
  // F_p(x) = p F(x-) + (1 - p) F(x). Throws if p is outside [0, 1].
  double f_p(double x, double p) const;
  // Left-continuous inverse inf{x : F(x) >= t}; total on [0, 1].
  double quantile(double t) const;
  // U(t) = quantile(1 - 1/t), t >= 1.
  double u_quantile(double t) const;

  double mean() const;
  double second_moment() const;
  // E (X - theta)^+ = integral of (1 - F) over (theta, inf).
  double upper_tail(double theta) const;
  // Integral of x dF over [0, theta].
  double partial_mean(double theta) const;

  // F evaluated right after the k-th atom (0-based).
  double cumulative(std::size_t k) const { return cumulative_[k]; }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

// M_n(F) = E max of n iid draws, via sum_i x_i [F(x_i)^n - F(x_i-)^n].
double prophet_value(const DiscreteDistribution& dist, int n);

// Increments v_j = u_j - u_{j-1} (u_0 = 0) of the equal-mass grid
// quantiles of a member of D_N. The grid distribution has an atom at 0 and
// atoms u_1, ..., u_{N-1}, each carrying mass 1/N.
struct QuantileIncrements {
  int grid_size = 0;
  std::vector<double> increments;

  // Throws InvalidArgument on negative entries or length != grid_size - 1.
  QuantileIncrements(int grid_size, std::vector<double> increments);

  std::vector<double> levels() const;  // u_1, ..., u_{N-1}
  DiscreteDistribution to_distribution() const;
};

// True when every atom's mass is a positive multiple of 1/N (within 1e-9).
bool in_grid_class(const DiscreteDistribution& dist, int grid_size);

// The N equal-mass atom values a_0 <= ... <= a_{N-1} of a member of D_N.
std::vector<double> grid_atoms(const DiscreteDistribution& dist, int grid_size);

// Least favorable distribution of the ratio game from the adversary's mixed
// strategy: u_i = sum_{j <= i} mu_j / (1 - (j/N)^n). Requires n >= 2.
DiscreteDistribution lfd_from_mu_ratio(std::span<const double> mu, int n,
                                       int grid_size);

// Least favorable distribution of the difference game: u_i = sum_{j<=i} mu_j.
DiscreteDistribution lfd_from_mu_diff(std::span<const double> mu,
                                      int grid_size);

}  // namespace prophet

#endif  // PROPHET_DIST_HPP_
