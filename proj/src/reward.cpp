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

#include "prophet/reward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "prophet/errors.hpp"
#include "prophet/kernel.hpp"

namespace prophet {
namespace {

// F_p(theta) above this is treated as 1: the rule never stops early.
constexpr double kNoStopThreshold = 1.0 - 1e-14;
// F(theta_x) == x within this means no randomization is needed.
constexpr double kLevelTolerance = 1e-12;

void check_horizon(int n) {
  if (n < 2) throw InvalidArgument("stopping horizon n must be >= 2");
}

// Weight of the jump of F^{<-} at y in the reward of the level-x rule.
double level_weight(double x, double y, int n) {
  const double xn1 = std::pow(x, n - 1);
  if (x >= 1.0) return 1.0 - y;
  return (1.0 - xn1) * std::min(1.0, (1.0 - y) / (1.0 - x)) + xn1 * (1.0 - y);
}

struct Interval {
  double lo, hi;
  double value_lo, value_hi;
  double bound;
  bool operator<(const Interval& other) const { return bound < other.bound; }
};

}  // namespace

void ThresholdRule::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("threshold must be finite and nonnegative");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("tie-break probability must lie in [0, 1]");
  }
}

double reward_v1(const DiscreteDistribution& dist, int n,
                 const ThresholdRule& rule) {
  check_horizon(n);
  rule.validate();
  const double fp = dist.f_p(rule.theta, rule.p);
  if (fp >= kNoStopThreshold) return dist.mean();
  const double on_stop =
      rule.theta + dist.upper_tail(rule.theta) / (1.0 - fp);
  const double head = dist.partial_mean(rule.theta) -
                      rule.p * rule.theta * dist.mass_at(rule.theta);
  return (1.0 - std::pow(fp, n)) * on_stop + std::pow(fp, n - 1) * head;
}

double reward_v2(const DiscreteDistribution& dist, int n,
                 const ThresholdRule& rule) {
  check_horizon(n);
  rule.validate();
  const double fp = dist.f_p(rule.theta, rule.p);
  if (fp >= kNoStopThreshold) return dist.mean();
  const double on_stop =
      rule.theta + dist.upper_tail(rule.theta) / (1.0 - fp);
  const double keep = std::pow(fp, n - 1);
  return (1.0 - keep) * on_stop + keep * dist.mean();
}

ThresholdRule level_rule(const DiscreteDistribution& dist, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("level must lie in [0, 1]");
  ThresholdRule rule;
  rule.theta = dist.quantile(x);
  const double at = dist.cdf(rule.theta);
  if (at - x > kLevelTolerance) {
    rule.p = std::clamp((at - x) / dist.mass_at(rule.theta), 0.0, 1.0);
  }
  return rule;
}

double reward_by_level(const DiscreteDistribution& dist, int n, double x) {
  check_horizon(n);
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("level must lie in [0, 1]");
  const auto& atoms = dist.atoms();
  // F^{<-} starts at the smallest atom (weight 1 at y = 0) and jumps by
  // a_{k+1} - a_k right after y = F(a_k).
  double total = atoms.front().value;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    total += level_weight(x, dist.cumulative(k), n) *
             (atoms[k + 1].value - atoms[k].value);
  }
  return total;
}

RuleEvaluation evaluate_rule(const DiscreteDistribution& dist, int n,
                             const ThresholdRule& rule) {
  RuleEvaluation out;
  out.value = reward_v2(dist, n, rule);
  const double prophet = prophet_value(dist, n);
  out.regret = prophet - out.value;
  out.ratio = prophet > 0.0 ? out.value / prophet : 1.0;
  return out;
}

OptimalRule optimal_rule(const DiscreteDistribution& dist, int n,
                         const OptimalRuleOptions& options) {
  check_horizon(n);
  OptimalRule best;
  double best_value = -1.0;
  auto consider = [&](double x, double value) {
    ++best.evaluations;
    if (value > best_value) {
      best_value = value;
      best.level = x;
    }
  };

  if (options.mode == SearchMode::kGridExact) {
    const int grid = options.grid_size;
    if (grid < 2) throw InvalidArgument("grid-exact search needs N >= 2");
    if (!in_grid_class(dist, grid)) {
      throw InvalidArgument("grid-exact search needs a member of D_" +
                            std::to_string(grid));
    }
    for (int i = 1; i < grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      consider(x, reward_by_level(dist, n, x));
    }
  } else {
    std::vector<double> levels = {0.0, 1.0};
    for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
      levels.push_back(dist.cumulative(k));
    }
    const std::size_t res =
        options.resolution > 0 ? options.resolution : 10 * dist.size();
    for (std::size_t i = 1; i < res; ++i) {
      levels.push_back(static_cast<double>(i) / static_cast<double>(res));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<double> values(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      values[i] = reward_by_level(dist, n, levels[i]);
      consider(levels[i], values[i]);
    }

    // V(x) is Lipschitz with constant (n-1)(max atom - min atom), so the
    // supremum over [lo, hi] is at most (V(lo) + V(hi) + L (hi - lo)) / 2.
    const double lipschitz =
        lipschitz_a(n) * (dist.max_value() - dist.min_value());
    std::priority_queue<Interval> queue;
    auto push = [&](double lo, double hi, double vlo, double vhi) {
      queue.push({lo, hi, vlo, vhi, 0.5 * (vlo + vhi + lipschitz * (hi - lo))});
    };
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      push(levels[i], levels[i + 1], values[i], values[i + 1]);
    }
    while (!queue.empty()) {
      Interval top = queue.top();
      if (top.bound - best_value <= options.target_gap ||
          best.evaluations >= options.max_evaluations ||
          top.hi - top.lo < 1e-15) {
        break;
      }
      queue.pop();
      const double mid = 0.5 * (top.lo + top.hi);
      const double vmid = reward_by_level(dist, n, mid);
      consider(mid, vmid);
      push(top.lo, mid, top.value_lo, vmid);
      push(mid, top.hi, vmid, top.value_hi);
    }
    if (!queue.empty()) {
      best.value_gap = std::max(0.0, queue.top().bound - best_value);
    }
  }

  best.rule = level_rule(dist, best.level);
  best.evaluation = evaluate_rule(dist, n, best.rule);
  const double prophet = prophet_value(dist, n);
  best.ratio_gap = prophet > 0.0 ? best.value_gap / prophet : 0.0;
  return best;
}

ThresholdRule corollary1_rule(const DiscreteDistribution& dist, int n) {
  check_horizon(n);
  const double target = 1.0 - 1.0 / n;
  ThresholdRule rule;
  rule.theta = dist.u_quantile(n);
  const double at = dist.cdf(rule.theta);
  if (std::abs(at - target) > kLevelTolerance) {
    rule.p = std::clamp((at - target) / dist.mass_at(rule.theta), 0.0, 1.0);
  }
  return rule;
}

double corollary1_constant(int n) {
  if (n < 1) throw InvalidArgument("corollary1_constant requires n >= 1");
  return 1.0 - std::pow(1.0 - 1.0 / n, n);
}

GrowthBound growth_bound_check(const DiscreteDistribution& dist, int n, int k) {
  if (n < 1 || k < 0) throw InvalidArgument("growth bound needs n >= 1, k >= 0");
  GrowthBound out;
  out.lambda = std::pow(1.0 - 1.0 / (n + k), n - 1);
  out.lhs = prophet_value(dist, n);
  out.rhs = (1.0 - out.lambda) * prophet_value(dist, n + k) +
            out.lambda * prophet_value(dist, 1);
  return out;
}

namespace {
void check_samuel_cahn(int n, double a, double b, double c) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0) || !(c > 0.0) || !(b + c < n)) {
    throw InvalidArgument(
        "three-atom family needs 0 < a < 1, b > 0, c > 0, b + c < n");
  }
}
}  // namespace

DiscreteDistribution samuel_cahn_distribution(int n, double a, double b,
                                              double c) {
  check_samuel_cahn(n, a, b, c);
  return DiscreteDistribution(
      {{0.0, 1.0 - (b + c) / n}, {a, c / n}, {1.0, b / n}});
}

SamuelCahnValues samuel_cahn_closed_forms(int n, double a, double b,
                                          double c) {
  check_samuel_cahn(n, a, b, c);
  const double low = 1.0 - (b + c) / n;  // F(0)
  const double mid = 1.0 - b / n;        // F(a)
  const double mean = (a * c + b) / n;
  SamuelCahnValues out;
  out.prophet = a * (std::pow(mid, n) - std::pow(low, n)) + 1.0 - std::pow(mid, n);
  const double low_keep = std::pow(low, n - 1);
  out.stop_above_0 = (1.0 - low_keep) * (a * c + b) / (c + b) + low_keep * mean;
  const double mid_keep = std::pow(mid, n - 1);
  out.stop_above_a = 1.0 - mid_keep + mid_keep * mean;
  out.stop_above_1 = mean;
  return out;
}

DiscreteDistribution ehsani_distribution(int n) {
  if (n < 2) throw InvalidArgument("two-atom family needs n >= 2");
  constexpr double e = std::numbers::e;
  const double tail = 1.0 / (static_cast<double>(n) * n);
  return DiscreteDistribution(
      {{(e - 2.0) / (e - 1.0), 1.0 - tail}, {n / (e - 1.0), tail}});
}

}  // namespace prophet
