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

#include "prophet/io.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "prophet/errors.hpp"

#ifndef PROPHET_SHARP_VERSION
#define PROPHET_SHARP_VERSION "unknown"
#endif

namespace prophet {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InvalidArgument("distribution CSV line " + std::to_string(line) +
                          ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

Json bracket_json(double lo, double hi) { return Json::array({lo, hi}); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json to_json(const DiscreteDistribution& dist) {
  Json atoms = Json::array();
  for (const Atom& a : dist.atoms()) atoms.push_back(Json::array({a.value, a.prob}));
  return Json{{"atoms", atoms}};
}

DiscreteDistribution distribution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
    throw InvalidArgument("distribution JSON needs an \"atoms\" array");
  }
  std::vector<Atom> atoms;
  for (const Json& pair : j["atoms"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw InvalidArgument("each atom must be a [value, prob] pair of numbers");
    }
    atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  if (atoms.empty()) throw InvalidArgument("distribution has no atoms");
  return DiscreteDistribution(std::move(atoms));
}

std::string distribution_to_csv(const DiscreteDistribution& dist) {
  std::string out = "value,prob\n";
  for (const Atom& a : dist.atoms()) {
    out += format_double(a.value) + "," + format_double(a.prob) + "\n";
  }
  return out;
}

DiscreteDistribution distribution_from_csv(std::string_view text) {
  std::vector<Atom> atoms;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "value,prob") {
        throw InvalidArgument("distribution CSV must start with the header value,prob");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw InvalidArgument("distribution CSV line " + std::to_string(line_no) +
                            ": expected two fields");
    }
    atoms.push_back({parse_double(line.substr(0, comma), line_no),
                     parse_double(line.substr(comma + 1), line_no)});
  }
  if (atoms.empty()) throw InvalidArgument("distribution has no atoms");
  return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution load_distribution(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const std::string ext = path.extension().string();
  bool json = ext == ".json";
  if (ext != ".json" && ext != ".csv") {
    const std::string_view body = trim(text);
    json = !body.empty() && body.front() == '{';
  }
  if (!json) return distribution_from_csv(text);
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("distribution JSON: ") + e.what());
  }
  return distribution_from_json(parsed);
}

Json to_json(const ThresholdRule& rule) { return Json{{"theta", rule.theta}, {"p", rule.p}}; }

Json to_json(const RuleEvaluation& eval) {
  return Json{{"value", eval.value}, {"ratio", eval.ratio}, {"regret", eval.regret}};
}

Json to_json(const SimResult& result) {
  return Json{{"mean", result.mean},
              {"std_error", result.std_error},
              {"trials", result.trials},
              {"seed", result.seed}};
}

Json to_json(const SharpConstantReport& report) {
  return Json{{"n", report.n},
              {"N", report.grid_size},
              {"kind", std::string(to_string(report.kind))},
              {"value", report.value},
              {"bracket", bracket_json(report.bracket.lower, report.bracket.upper)},
              {"certified_bracket", report.certified_bracket},
              {"gap", report.gap},
              {"threshold_index", report.threshold_index},
              {"rule", to_json(report.rule)},
              {"lfd", to_json(report.lfd)}};
}

Json to_json(const ConstrainedResult& result) {
  Json params = result.family == Family::kVariance
                    ? Json{{"sigma", result.sigma}}
                    : Json{{"p0", result.p0}, {"p1", result.p1}};
  return Json{{"n", result.n},
              {"N", result.grid_size},
              {"kind", result.family == Family::kVariance ? "difference" : "ratio"},
              {"family", std::string(to_string(result.family))},
              {"params", params},
              {"value", result.value},
              {"bracket", bracket_json(result.lower, result.upper)},
              {"gap", result.upper - result.lower},
              {"certificate", "grid-level, no continuum certificate"},
              {"threshold_index", result.threshold_index},
              {"rule", to_json(result.rule)},
              {"lfd", to_json(result.lfd)}};
}

Json to_json(const PayoffMatrix& matrix) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < matrix.entries.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < matrix.entries.cols(); ++j) row.push_back(matrix.entries(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"kind", std::string(to_string(matrix.kind))},
              {"n", matrix.n},
              {"N", matrix.grid_size},
              {"rows", rows}};
}

std::string matrix_to_csv(const PayoffMatrix& matrix) {
  std::string out;
  for (Eigen::Index i = 0; i < matrix.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.entries.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(matrix.entries(i, j));
    }
    out += '\n';
  }
  return out;
}

RunManifest RunManifest::make(std::string command, Json parameters,
                              std::vector<std::uint64_t> seeds) {
  RunManifest m;
  m.command = std::move(command);
  m.parameters = std::move(parameters);
  m.version = PROPHET_SHARP_VERSION;
  m.seeds = std::move(seeds);
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.timestamp = buf;
  return m;
}

Json to_json(const RunManifest& manifest) {
  return Json{{"command", manifest.command},
              {"parameters", manifest.parameters},
              {"version", manifest.version},
              {"timestamp", manifest.timestamp},
              {"seeds", manifest.seeds}};
}

std::string manifest_comment(const RunManifest& manifest) {
  std::string out = "# prophet-sharp manifest\n";
  out += "# command: " + manifest.command + "\n";
  out += "# parameters: " + manifest.parameters.dump() + "\n";
  out += "# version: " + manifest.version + "\n";
  out += "# timestamp: " + manifest.timestamp + "\n";
  out += "# seeds: " + Json(manifest.seeds).dump() + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read from " + path.string() + " failed");
  return buf.str();
}

}  // namespace prophet
