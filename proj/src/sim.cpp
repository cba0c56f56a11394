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

#include "prophet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "prophet/errors.hpp"

namespace prophet {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_config(const SimConfig& config, int min_n) {
  if (config.trials < 1) throw InvalidArgument("simulation needs trials >= 1");
  if (config.n < min_n) {
    throw InvalidArgument("simulation horizon n must be >= " + std::to_string(min_n));
  }
}

// Runs `trial(rng)` for every trial index and aggregates the outcomes.
template <typename Trial>
SimResult simulate(const SimConfig& config, Trial trial) {
  const std::uint64_t total = config.trials;
  std::vector<double> outcomes(total);
  unsigned jobs = config.jobs == 0 ? std::thread::hardware_concurrency() : config.jobs;
  jobs = static_cast<unsigned>(std::clamp<std::uint64_t>(jobs, 1, total));

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng = SplitMix64::for_trial(config.seed, t);
      outcomes[t] = trial(rng);
    }
  };
  if (jobs == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const std::uint64_t begin = j * chunk;
      const std::uint64_t end = std::min(total, begin + chunk);
      if (begin < end) threads.emplace_back(work, begin, end);
    }
    for (std::thread& t : threads) t.join();
  }

  SimResult result;
  result.trials = total;
  result.seed = config.seed;
  result.mean = pairwise_sum(outcomes) / static_cast<double>(total);
  if (total > 1) {
    for (double& x : outcomes) x = (x - result.mean) * (x - result.mean);
    const double variance = pairwise_sum(outcomes) / static_cast<double>(total - 1);
    result.std_error = std::sqrt(variance / static_cast<double>(total));
  }
  return result;
}

}  // namespace

SplitMix64 SplitMix64::for_trial(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(mix64(seed) + mix64(trial ^ 0x9e3779b97f4a7c15ULL));
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double sample(const DiscreteDistribution& dist, SplitMix64& rng) {
  return dist.quantile(rng.uniform());
}

SimResult run_rule(const DiscreteDistribution& dist, const ThresholdRule& rule,
                   const SimConfig& config) {
  check_config(config, 2);
  rule.validate();
  return simulate(config, [&](SplitMix64& rng) {
    for (int t = 1; t < config.n; ++t) {
      const double x = sample(dist, rng);
      if (x > rule.theta) return x;
      if (x == rule.theta && rng.uniform() <= rule.p) return x;
    }
    return sample(dist, rng);
  });
}

SimResult run_prophet(const DiscreteDistribution& dist, const SimConfig& config) {
  check_config(config, 1);
  return simulate(config, [&](SplitMix64& rng) {
    double best = sample(dist, rng);
    for (int t = 1; t < config.n; ++t) best = std::max(best, sample(dist, rng));
    return best;
  });
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace prophet
