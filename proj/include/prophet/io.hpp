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

#ifndef PROPHET_IO_HPP_
#define PROPHET_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prophet/constrained.hpp"
#include "prophet/dist.hpp"
#include "prophet/game.hpp"
#include "prophet/kernel.hpp"
#include "prophet/reward.hpp"
#include "prophet/sim.hpp"

namespace prophet {

using Json = nlohmann::ordered_json;

// Shortest decimal form that round-trips ("%.17g").
std::string format_double(double x);

// {"atoms": [[value, prob], ...]}
Json to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const Json& j);

// Header "value,prob", one atom per line. Lines starting with '#' and blank
// lines are ignored on input.
std::string distribution_to_csv(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_csv(std::string_view text);

// Picks the format from the extension (.json / .csv), else from the first
// non-blank character. Throws IoError if the file cannot be read and
// InvalidArgument if its content is malformed.
DiscreteDistribution load_distribution(const std::filesystem::path& path);

Json to_json(const ThresholdRule& rule);
Json to_json(const RuleEvaluation& eval);
Json to_json(const SimResult& result);
// {n, N, kind, value, bracket: [lo, hi], gap, rule: {theta, p}, lfd: {atoms}}
// plus certified_bracket and threshold_index.
Json to_json(const SharpConstantReport& report);
// Same shape with {family, params} and the certificate as the bracket.
Json to_json(const ConstrainedResult& result);
// {kind, n, N, rows: [[...], ...]}
Json to_json(const PayoffMatrix& matrix);
std::string matrix_to_csv(const PayoffMatrix& matrix);

// Everything needed to rerun a command with the same binary.
struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::uint64_t> seeds;

  // Fills version and timestamp.
  static RunManifest make(std::string command, Json parameters,
                          std::vector<std::uint64_t> seeds = {});
};

Json to_json(const RunManifest& manifest);
// "# prophet-sharp manifest" followed by one "# key: value" line per field.
std::string manifest_comment(const RunManifest& manifest);

// Writes the whole file at once; creates parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace prophet

#endif  // PROPHET_IO_HPP_
