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

// Command-line front end: table reproduction, rule evaluation and
// Monte Carlo checks. Exit codes: 0 ok, 2 invalid arguments, 3 solver
// failure, 4 I/O error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "prophet/constrained.hpp"
#include "prophet/errors.hpp"
#include "prophet/game.hpp"
#include "prophet/io.hpp"
#include "prophet/kernel.hpp"
#include "prophet/reward.hpp"
#include "prophet/sim.hpp"

namespace fs = std::filesystem;
using prophet::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct TableOptions {
  std::vector<int> n_list;
  std::vector<std::string> n_raw;
  int grid_size = 1000;
  std::optional<double> tol;
  unsigned jobs = 1;
  std::string out = ".";
  std::string format = "csv";
  double sigma = 1.0;
  double p0 = 20.0;
  double p1 = 5.0;
};

struct RuleOptions {
  std::string dist_file;
  int n = 10;
  double theta = 0.0;
  double p = 0.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool prophet = false;
  std::string out;
};

struct MatrixOptions {
  std::string kind = "ratio";
  int n = 10;
  int grid_size = 100;
  std::string out;
  std::string format = "csv";
};

unsigned default_jobs() {
  if (const char* env = std::getenv("PROPHET_SHARP_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid PROPHET_SHARP_JOBS='" << env << "'\n";
  }
  return 1;
}

double table_tolerance(const TableOptions& o) {
  return o.tol ? *o.tol : prophet::default_game_tolerance(o.grid_size);
}

// Runs task(i) for i in [0, count) on up to `jobs` threads. Results are
// stored by index, so output order never depends on scheduling.
void for_each_row(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) task(i);
  };
  std::vector<std::thread> threads;
  for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
}

// Per-row outcome: either a payload or the error that aborted the row.
template <typename T>
struct RowResult {
  std::optional<T> value;
  std::string error;
  int code = kExitOk;
};

template <typename T, typename F>
RowResult<T> guarded(F&& f) {
  RowResult<T> r;
  try {
    r.value = f();
  } catch (const prophet::SolverError& e) {
    r.error = e.what();
    r.code = kExitSolver;
  } catch (const prophet::InvalidArgument& e) {
    r.error = e.what();
    r.code = kExitInvalid;
  }
  return r;
}

Json table_parameters(const TableOptions& o, bool constrained_sigma, bool pareto) {
  Json p{{"n", o.n_list}, {"N", o.grid_size}, {"tol", table_tolerance(o)}, {"jobs", o.jobs},
         {"format", o.format}};
  if (constrained_sigma) p["sigma"] = o.sigma;
  if (pareto) {
    p["p0"] = o.p0;
    p["p1"] = o.p1;
  }
  return p;
}

std::string csv_row(std::initializer_list<double> values, int n) {
  std::string line = std::to_string(n);
  for (double v : values) line += "," + prophet::format_double(v);
  return line + "\n";
}

int report_row_errors(const std::vector<int>& n_list, const std::vector<std::string>& errors,
                      const std::vector<int>& codes) {
  int exit_code = kExitOk;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (codes[i] == kExitOk) continue;
    std::cerr << "error: row n=" << n_list[i] << " aborted: " << errors[i] << "\n";
    exit_code = std::max(exit_code, codes[i]);
  }
  return exit_code;
}

int cmd_table1(const TableOptions& o) {
  const double tol = table_tolerance(o);
  struct Row {
    prophet::SharpConstantReport ratio, regret;
  };
  std::vector<RowResult<Row>> rows(o.n_list.size());
  for_each_row(rows.size(), o.jobs, [&](std::size_t i) {
    rows[i] = guarded<Row>([&] {
      const int n = o.n_list[i];
      return Row{prophet::sharp_ratio(n, o.grid_size, tol), prophet::sharp_regret(n, o.grid_size, tol)};
    });
  });

  const auto manifest = prophet::RunManifest::make("table1", table_parameters(o, false, false));
  const fs::path out(o.out);
  std::vector<std::string> errors;
  std::vector<int> codes;
  if (o.format == "json") {
    Json doc{{"manifest", to_json(manifest)}, {"rows", Json::array()}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].value) {
        doc["rows"].push_back(Json{{"n", o.n_list[i]},
                                   {"ratio", to_json(rows[i].value->ratio)},
                                   {"regret", to_json(rows[i].value->regret)}});
      }
    }
    prophet::write_text(out / "table1.json", doc.dump(2) + "\n");
  } else {
    std::string csv = prophet::manifest_comment(manifest);
    csv += "n,R_value,R_lo,R_hi,A_value,A_lo,A_hi,gap_R,gap_A\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].value) continue;
      const Row& r = *rows[i].value;
      const int n = o.n_list[i];
      csv += csv_row({r.ratio.value, r.ratio.bracket.lower, r.ratio.bracket.upper, r.regret.value,
                      r.regret.bracket.lower, r.regret.bracket.upper, r.ratio.gap, r.regret.gap},
                     n);
      for (const auto* rep : {&r.ratio, &r.regret}) {
        const std::string stem = "table1_n" + std::to_string(n) + "_" +
                                 std::string(prophet::to_string(rep->kind));
        Json j = to_json(*rep);
        j["manifest"] = to_json(manifest);
        prophet::write_text(out / (stem + ".json"), j.dump(2) + "\n");
        prophet::write_text(out / (stem + "_lfd.csv"),
                            prophet::manifest_comment(manifest) + prophet::distribution_to_csv(rep->lfd));
      }
    }
    prophet::write_text(out / "table1.csv", csv);
  }
  for (const auto& r : rows) {
    errors.push_back(r.error);
    codes.push_back(r.code);
  }
  return report_row_errors(o.n_list, errors, codes);
}

int constrained_table(const TableOptions& o, bool pareto) {
  const double tol = table_tolerance(o);
  const std::string name = pareto ? "table3" : "table2";
  std::vector<RowResult<prophet::ConstrainedResult>> rows(o.n_list.size());
  for_each_row(rows.size(), o.jobs, [&](std::size_t i) {
    rows[i] = guarded<prophet::ConstrainedResult>([&] {
      const int n = o.n_list[i];
      return pareto ? prophet::pareto_ratio(n, o.grid_size, o.p0, o.p1, tol)
                    : prophet::kappa(n, o.grid_size, tol, o.sigma);
    });
  });

  const auto manifest = prophet::RunManifest::make(name, table_parameters(o, !pareto, pareto));
  const fs::path out(o.out);
  if (o.format == "json") {
    Json doc{{"manifest", to_json(manifest)}, {"rows", Json::array()}};
    for (const auto& r : rows) {
      if (r.value) doc["rows"].push_back(to_json(*r.value));
    }
    prophet::write_text(out / (name + ".json"), doc.dump(2) + "\n");
  } else {
    std::string csv = prophet::manifest_comment(manifest);
    csv += pareto ? "n,value,lower,upper,gap\n" : "n,kappa,lower,upper,gap\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].value) continue;
      const auto& r = *rows[i].value;
      csv += csv_row({r.value, r.lower, r.upper, r.upper - r.lower}, o.n_list[i]);
      const std::string stem = name + "_n" + std::to_string(o.n_list[i]);
      Json j = to_json(r);
      j["manifest"] = to_json(manifest);
      prophet::write_text(out / (stem + ".json"), j.dump(2) + "\n");
      prophet::write_text(out / (stem + "_lfd.csv"),
                          prophet::manifest_comment(manifest) + prophet::distribution_to_csv(r.lfd));
    }
    prophet::write_text(out / (name + ".csv"), csv);
  }
  std::vector<std::string> errors;
  std::vector<int> codes;
  for (const auto& r : rows) {
    errors.push_back(r.error);
    codes.push_back(r.code);
  }
  return report_row_errors(o.n_list, errors, codes);
}

void emit(const std::string& out, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    prophet::write_text(out, text);
  }
}

int cmd_eval(const RuleOptions& o) {
  const prophet::DiscreteDistribution dist = prophet::load_distribution(o.dist_file);
  const prophet::ThresholdRule rule{o.theta, o.p};
  rule.validate();
  const auto manifest = prophet::RunManifest::make(
      "eval", Json{{"dist", o.dist_file}, {"n", o.n}, {"theta", o.theta}, {"p", o.p}});
  Json doc{{"manifest", to_json(manifest)},
           {"n", o.n},
           {"rule", to_json(rule)},
           {"reward_v1", prophet::reward_v1(dist, o.n, rule)},
           {"reward_v2", prophet::reward_v2(dist, o.n, rule)},
           {"prophet_value", prophet::prophet_value(dist, o.n)},
           {"evaluation", to_json(prophet::evaluate_rule(dist, o.n, rule))},
           {"corollary1_floor", prophet::corollary1_constant(o.n)}};
  emit(o.out, doc);
  return kExitOk;
}

int cmd_simulate(const RuleOptions& o) {
  if (o.trials < 1) throw prophet::InvalidArgument("--trials must be >= 1");
  const prophet::DiscreteDistribution dist = prophet::load_distribution(o.dist_file);
  prophet::SimConfig config;
  config.trials = o.trials;
  config.seed = o.seed;
  config.n = o.n;
  config.jobs = o.jobs;
  const prophet::ThresholdRule rule{o.theta, o.p};
  const prophet::SimResult result =
      o.prophet ? prophet::run_prophet(dist, config) : prophet::run_rule(dist, rule, config);
  Json params{{"dist", o.dist_file}, {"n", o.n}, {"trials", o.trials}, {"seed", o.seed},
              {"target", o.prophet ? "prophet" : "rule"}};
  if (!o.prophet) params["rule"] = to_json(rule);
  Json doc = to_json(result);
  doc["manifest"] = to_json(prophet::RunManifest::make("simulate", params, {o.seed}));
  emit(o.out, doc);
  return kExitOk;
}

int cmd_matrix(const MatrixOptions& o) {
  const auto matrix =
      prophet::payoff_matrix(prophet::kernel_kind_from_string(o.kind), o.n, o.grid_size);
  const auto manifest = prophet::RunManifest::make(
      "matrix", Json{{"kind", o.kind}, {"n", o.n}, {"N", o.grid_size}});
  if (o.format == "json") {
    Json doc = to_json(matrix);
    doc["manifest"] = to_json(manifest);
    emit(o.out, doc);
  } else {
    const std::string text = prophet::manifest_comment(manifest) + prophet::matrix_to_csv(matrix);
    if (o.out.empty()) {
      std::cout << text;
    } else {
      prophet::write_text(o.out, text);
    }
  }
  return kExitOk;
}

void add_table_options(CLI::App* cmd, TableOptions& o) {
  cmd->add_option("--n", o.n_raw, "Horizons n (default 10 25 50 100; empty for header only)")
      ->expected(0, -1)
      ->allow_extra_args();
  cmd->add_option("--N", o.grid_size, "Grid size N")->check(CLI::Range(3, 1 << 20))->capture_default_str();
  cmd->add_option("--tol", o.tol, "Certificate tolerance (default 1e-7 for N <= 2000, 1e-5 above)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o.jobs, "Rows solved concurrently (env PROPHET_SHARP_JOBS)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_rule_options(CLI::App* cmd, RuleOptions& o) {
  cmd->add_option("dist", o.dist_file, "Distribution file (.json or .csv)")->required();
  cmd->add_option("--n", o.n, "Horizon n")->check(CLI::Range(2, 1 << 30))->capture_default_str();
  cmd->add_option("--theta", o.theta, "Threshold")->required();
  cmd->add_option("--p", o.p, "Tie-break probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--out", o.out, "Write JSON here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp constants for single-threshold prophet inequalities"};
  app.set_version_flag("--version", std::string(PROPHET_SHARP_VERSION));
  app.require_subcommand(1);

  TableOptions t1, t2, t3;
  t1.jobs = t2.jobs = t3.jobs = default_jobs();
  auto* table1 = app.add_subcommand("table1", "Ratio and regret constants over D_N");
  add_table_options(table1, t1);
  auto* table2 = app.add_subcommand("table2", "kappa_n for the bounded-variance family");
  add_table_options(table2, t2);
  table2->add_option("--sigma", t2.sigma, "Standard deviation bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* table3 = app.add_subcommand("table3", "Worst-case ratio for the Pareto-like family");
  add_table_options(table3, t3);
  table3->add_option("--p0", t3.p0, "Light-tail exponent p0 > p1")->capture_default_str();
  table3->add_option("--p1", t3.p1, "Heavy-tail exponent p1 > 1")->capture_default_str();

  RuleOptions ev, sim;
  sim.jobs = default_jobs();
  auto* eval = app.add_subcommand("eval", "Evaluate one threshold rule on a distribution");
  add_rule_options(eval, ev);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a rule or of M_n");
  add_rule_options(simulate, sim);
  simulate->get_option("--theta")->required(false);
  simulate->add_option("--trials", sim.trials, "Number of trials (>= 1)")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  simulate->add_option("--jobs", sim.jobs, "Worker threads (env PROPHET_SHARP_JOBS)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  simulate->add_flag("--prophet", sim.prophet, "Simulate E max instead of the rule");

  MatrixOptions mo;
  auto* matrix = app.add_subcommand("matrix", "Dump a payoff matrix");
  matrix->add_option("--kind", mo.kind, "ratio or difference")->capture_default_str();
  matrix->add_option("--n", mo.n, "Horizon n")->capture_default_str();
  matrix->add_option("--N", mo.grid_size, "Grid size N")->capture_default_str();
  matrix->add_option("--out", mo.out, "Write here instead of stdout");
  matrix->add_option("--format", mo.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  for (auto [cmd, opts] : {std::pair{table1, &t1}, {table2, &t2}, {table3, &t3}}) {
    if (cmd->get_option("--n")->count() == 0) {
      opts->n_list = {10, 25, 50, 100};
      continue;
    }
    for (const std::string& raw : opts->n_raw) {
      if (raw.empty() || raw == "{}") continue;
      try {
        std::size_t used = 0;
        const int n = std::stoi(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        opts->n_list.push_back(n);
      } catch (const std::exception&) {
        std::cerr << "error: --n expects integers, got '" << raw << "'\n";
        return kExitInvalid;
      }
    }
  }

  try {
    if (*table1) return cmd_table1(t1);
    if (*table2) return constrained_table(t2, false);
    if (*table3) return constrained_table(t3, true);
    if (*eval) return cmd_eval(ev);
    if (*simulate) return cmd_simulate(sim);
    if (*matrix) return cmd_matrix(mo);
  } catch (const prophet::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const prophet::SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (best gap " << e.best_gap() << ")\n";
    return kExitSolver;
  } catch (const prophet::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
