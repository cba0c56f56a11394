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

#include "prophet/dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prophet/errors.hpp"

namespace prophet {
namespace {

// Mixed strategies coming out of a solver are normalized to ~1e-10.
constexpr double kStrategyTolerance = 1e-9;

void check_strategy(std::span<const double> mu, int grid_size, bool exact_sum,
                    const char* who) {
  if (grid_size < 2) {
    throw InvalidArgument(std::string(who) + ": grid size must be >= 2");
  }
  if (mu.size() != static_cast<std::size_t>(grid_size - 1)) {
    throw InvalidArgument(std::string(who) + ": expected N-1 = " +
                          std::to_string(grid_size - 1) + " weights, got " +
                          std::to_string(mu.size()));
  }
  double total = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0)) {
      throw InvalidArgument(std::string(who) + ": negative weight");
    }
    total += m;
  }
  if (exact_sum ? std::abs(total - 1.0) > kStrategyTolerance
                : total > 1.0 + kStrategyTolerance) {
    throw InvalidArgument(std::string(who) + ": weights sum to " +
                          std::to_string(total));
  }
}

DiscreteDistribution grid_distribution(const std::vector<double>& levels,
                                       int grid_size) {
  const double mass = 1.0 / grid_size;
  std::vector<Atom> atoms;
  atoms.reserve(levels.size() + 1);
  atoms.push_back({0.0, mass});
  for (double u : levels) atoms.push_back({u, mass});
  return DiscreteDistribution::merged(std::move(atoms));
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("distribution has no atoms");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.value) || a.value < 0.0) {
      throw InvalidArgument("atom values must be finite and nonnegative");
    }
    if (!(a.prob > 0.0) || a.prob > 1.0 + kProbTolerance) {
      throw InvalidArgument("atom probabilities must lie in (0, 1]");
    }
    if (i > 0 && !(atoms_[i - 1].value < a.value)) {
      throw InvalidArgument("atom values must be strictly increasing");
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw InvalidArgument("atom probabilities sum to " +
                          std::to_string(total) + ", not 1");
  }
  cumulative_.resize(atoms_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    running += atoms_[i].prob;
    cumulative_[i] = std::min(running, 1.0);
  }
  cumulative_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::merged(std::vector<Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().value == a.value) {
      out.back().prob += a.prob;
    } else {
      out.push_back(a);
    }
  }
  return DiscreteDistribution(std::move(out));
}

DiscreteDistribution DiscreteDistribution::equal_mass(
    std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("no values given");
  const double mass = 1.0 / static_cast<double>(values.size());
  std::vector<Atom> atoms;
  atoms.reserve(values.size());
  for (double v : values) atoms.push_back({v, mass});
  return merged(std::move(atoms));
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  return DiscreteDistribution({{value, 1.0}});
}

double DiscreteDistribution::cdf(double x) const {
  auto it = std::upper_bound(
      atoms_.begin(), atoms_.end(), x,
      [](double v, const Atom& a) { return v < a.value; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double DiscreteDistribution::cdf_left(double x) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), x,
      [](const Atom& a, double v) { return a.value < v; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double DiscreteDistribution::mass_at(double x) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), x,
      [](const Atom& a, double v) { return a.value < v; });
  if (it == atoms_.end() || it->value != x) return 0.0;
  return it->prob;
}

double DiscreteDistribution::f_p(double x, double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("tie-break probability must lie in [0, 1]");
  }
  return p * cdf_left(x) + (1.0 - p) * cdf(x);
}

double DiscreteDistribution::quantile(double t) const {
  if (t <= 0.0) return atoms_.front().value;
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), t);
  if (it == cumulative_.end()) return atoms_.back().value;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].value;
}

double DiscreteDistribution::u_quantile(double t) const {
  if (!(t >= 1.0)) throw InvalidArgument("U(t) requires t >= 1");
  return quantile(1.0 - 1.0 / t);
}

double DiscreteDistribution::mean() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.value * a.prob;
  return s;
}

double DiscreteDistribution::second_moment() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.value * a.value * a.prob;
  return s;
}

double DiscreteDistribution::upper_tail(double theta) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value > theta) s += a.prob * (a.value - theta);
  }
  return s;
}

double DiscreteDistribution::partial_mean(double theta) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value > theta) break;
    s += a.prob * a.value;
  }
  return s;
}

double prophet_value(const DiscreteDistribution& dist, int n) {
  if (n < 1) throw InvalidArgument("prophet_value requires n >= 1");
  double total = 0.0;
  double below = 0.0;  // F(x_i-)^n
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double at = std::pow(dist.cumulative(i), n);
    total += dist.atoms()[i].value * (at - below);
    below = at;
  }
  return total;
}

QuantileIncrements::QuantileIncrements(int n_grid, std::vector<double> v)
    : grid_size(n_grid), increments(std::move(v)) {
  if (grid_size < 2 ||
      increments.size() != static_cast<std::size_t>(grid_size - 1)) {
    throw InvalidArgument("quantile increments need N >= 2 and N-1 entries");
  }
  for (double x : increments) {
    if (!(x >= 0.0)) throw InvalidArgument("quantile increments must be >= 0");
  }
}

std::vector<double> QuantileIncrements::levels() const {
  std::vector<double> u(increments.size());
  double running = 0.0;
  for (std::size_t j = 0; j < increments.size(); ++j) {
    running += increments[j];
    u[j] = running;
  }
  return u;
}

DiscreteDistribution QuantileIncrements::to_distribution() const {
  return grid_distribution(levels(), grid_size);
}

bool in_grid_class(const DiscreteDistribution& dist, int grid_size) {
  if (grid_size < 1) return false;
  for (const Atom& a : dist.atoms()) {
    const double k = a.prob * grid_size;
    if (std::abs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0) {
      return false;
    }
  }
  return true;
}

std::vector<double> grid_atoms(const DiscreteDistribution& dist,
                               int grid_size) {
  if (!in_grid_class(dist, grid_size)) {
    throw InvalidArgument("distribution is not a member of D_" +
                          std::to_string(grid_size));
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid_size));
  for (const Atom& a : dist.atoms()) {
    const auto copies = static_cast<int>(std::lround(a.prob * grid_size));
    out.insert(out.end(), static_cast<std::size_t>(copies), a.value);
  }
  return out;
}

DiscreteDistribution lfd_from_mu_ratio(std::span<const double> mu, int n,
                                       int grid_size) {
  if (n < 2) throw InvalidArgument("lfd_from_mu_ratio requires n >= 2");
  check_strategy(mu, grid_size, /*exact_sum=*/true, "lfd_from_mu_ratio");
  std::vector<double> u(mu.size());
  double running = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double level = static_cast<double>(j + 1) / grid_size;
    running += mu[j] / -std::expm1(n * std::log(level));
    u[j] = running;
  }
  return grid_distribution(u, grid_size);
}

DiscreteDistribution lfd_from_mu_diff(std::span<const double> mu,
                                      int grid_size) {
  check_strategy(mu, grid_size, /*exact_sum=*/false, "lfd_from_mu_diff");
  std::vector<double> u(mu.size());
  double running = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    running += mu[j];
    u[j] = running;
  }
  return grid_distribution(u, grid_size);
}

}  // namespace prophet
