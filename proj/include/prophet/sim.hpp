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

#ifndef PROPHET_SIM_HPP_
#define PROPHET_SIM_HPP_

#include <cstdint>
#include <span>

#include "prophet/dist.hpp"
#include "prophet/reward.hpp"

namespace prophet {

// SplitMix64 (Steele, Lea and Flood). One instance per trial; the state is
// derived from (seed, trial) so results do not depend on thread layout.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next();
  // Uniform on (0, 1] with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int n = 2;
  // Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned jobs = 1;
};

struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Inverse-CDF draw: quantile(F, U) with U uniform on (0, 1].
double sample(const DiscreteDistribution& dist, SplitMix64& rng);

// Monte Carlo estimate of V_n(tau_p(theta); F). The tie-break coin is only
// drawn when an observation equals theta exactly.
SimResult run_rule(const DiscreteDistribution& dist, const ThresholdRule& rule,
                   const SimConfig& config);

// Monte Carlo estimate of M_n(F).
SimResult run_prophet(const DiscreteDistribution& dist, const SimConfig& config);

// Sum by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace prophet

#endif  // PROPHET_SIM_HPP_
