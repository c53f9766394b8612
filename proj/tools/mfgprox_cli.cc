// Copyright 2026 The mfgprox Authors.
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

// Command-line front end: run, compare and sweep solver experiments.

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfgprox/experiment.h"
#include "mfgprox/model.h"
#include "mfgprox/model_io.h"
#include "mfgprox/solvers.h"

namespace {

using mfgprox::ExperimentSpec;

void add_model_options(CLI::App* app, mfgprox::ModelSource& source) {
  app->add_option("--benchmark", source.benchmark, "Builtin benchmark")
      ->check(CLI::IsMember({"beach-bar"}));
  app->add_option("--states", source.num_states, "Number of states")
      ->check(CLI::PositiveNumber);
  app->add_option("--horizon", source.horizon, "Horizon H")
      ->check(CLI::PositiveNumber);
  app->add_option("--epsilon", source.epsilon, "Beach bar move noise");
}

void add_shared_solver_options(CLI::App* app, mfgprox::SolverConfig& config) {
  app->add_option("--lambda", config.lambda, "KL regularization strength");
  app->add_option("--eta", config.eta, "Learning rate");
  app->add_option("--mu-floor", config.mu_floor,
                  "Floor applied to mu inside log rewards");
  app->add_option("--record-every", config.record_every,
                  "Trace stride for inner steps");
  app->add_option("--exploit-every", config.exploitability_every,
                  "Record exploitability every n inner steps (0: end only)");
}

void add_solver_options(CLI::App* app, ExperimentSpec& spec,
                        std::string& solver, const std::string& suffix) {
  app->add_option("--solver" + suffix, solver, "rmd or pp")
      ->check(CLI::IsMember({"rmd", "pp"}));
  app->add_option("--inner" + suffix, spec.config.inner_iters,
                  "Inner RMD iterations per outer step");
  app->add_option("--outer" + suffix, spec.config.outer_iters,
                  "Outer proximal point iterations");
}


std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Reads a flat key=value file whose keys are flag names without the leading
// dashes and fills every option of `app` that was not given on the command
// line. Blank lines and lines starting with '#' are skipped.
void apply_config_file(CLI::App* app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    CLI::Option* option = key == "config" ? nullptr
                                          : app->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": unknown key '" + key + "'");
    }
    if (option->count() > 0) continue;
    option->add_result(value);
    option->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal point / regularized mirror descent solver for "
               "finite mean-field games"};
  app.require_subcommand(1);
  std::string run_config;
  std::string compare_config;
  std::string sweep_config;

  // run
  ExperimentSpec run_spec;
  std::string run_solver = "pp";
  std::string run_model;
  std::string run_plot;
  CLI::App* run = app.add_subcommand("run", "Run one solver and write a trace");
  run->add_option("--config", run_config,
                   "key=value file with flag defaults");
  add_model_options(run, run_spec.model);
  run->add_option("--model", run_model, "Model JSON file (overrides benchmark)");
  add_solver_options(run, run_spec, run_solver, "");
  add_shared_solver_options(run, run_spec.config);
  run->add_option("--out", run_spec.trace_csv, "Trace CSV path");
  run->add_option("--plot", run_plot, "Optional SVG plot path");
  run->add_option("--probe-h", run_spec.probe_h, "Step of the plotted cell");
  run->add_option("--probe-s", run_spec.probe_s, "State of the plotted cell");
  run->add_option("--seed", run_spec.rng_seed, "Seed for sampled diagnostics");
  run->add_option("--check-monotonicity", run_spec.monotonicity_samples,
                  "Sample count for the weak monotonicity check (0: skip)");
  run->add_flag("--timing", run_spec.write_timing,
                "Write measured wall-clock times instead of 0");

  // compare
  ExperimentSpec cmp_a;
  ExperimentSpec cmp_b;
  std::string solver_a = "pp";
  std::string solver_b = "rmd";
  std::string model_a;
  std::string model_b;
  std::string cmp_out = "compare.csv";
  cmp_b.config.inner_iters = 2000;
  cmp_b.config.outer_iters = 1;
  CLI::App* compare =
      app.add_subcommand("compare", "Run two solvers and align exploitability");
  compare->add_option("--config", compare_config,
                       "key=value file with flag defaults");
  add_model_options(compare, cmp_a.model);
  add_shared_solver_options(compare, cmp_a.config);
  add_solver_options(compare, cmp_a, solver_a, "-a");
  add_solver_options(compare, cmp_b, solver_b, "-b");
  compare->add_option("--model-a", model_a, "Model JSON for run a");
  compare->add_option("--model-b", model_b, "Model JSON for run b");
  compare->add_option("--out", cmp_out, "Comparison CSV path");

  // sweep
  ExperimentSpec sweep_spec;
  std::string sweep_solver = "pp";
  std::string sweep_model;
  std::vector<double> lambdas{0.05, 0.1, 0.2};
  std::string out_dir = ".";
  int threads = 0;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run one experiment per lambda in parallel");
  sweep->add_option("--config", sweep_config,
                     "key=value file with flag defaults");
  add_model_options(sweep, sweep_spec.model);
  sweep->add_option("--model", sweep_model, "Model JSON file");
  add_solver_options(sweep, sweep_spec, sweep_solver, "");
  add_shared_solver_options(sweep, sweep_spec.config);
  sweep->add_option("--lambdas", lambdas, "Lambda values")->delimiter(',');
  sweep->add_option("--out-dir", out_dir, "Directory for trace files");
  sweep->add_option("--threads", threads,
                    "Worker count (capped by MFG_PROX_THREADS)");

  // export-model
  mfgprox::ModelSource export_source;
  double export_floor = 1e-9;
  std::string export_out = "model.json";
  CLI::App* export_model =
      app.add_subcommand("export-model", "Write a builtin benchmark as JSON");
  add_model_options(export_model, export_source);
  export_model->add_option("--mu-floor", export_floor, "Reward mu floor");
  export_model->add_option("--out", export_out, "Output JSON path");

  // validate
  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a model JSON file");
  validate->add_option("model", validate_path, "Model JSON file")->required();

  // eta-star
  double es_lambda = 0.1;
  double es_sigma_min = 1.0 / 3.0;
  int es_horizon = 10;
  int es_actions = 3;
  double es_lipschitz = 1.0;
  CLI::App* eta = app.add_subcommand(
      "eta-star", "Print the theoretical learning-rate bound and constant C");
  eta->add_option("--lambda", es_lambda);
  eta->add_option("--sigma-min", es_sigma_min);
  eta->add_option("--horizon", es_horizon);
  eta->add_option("--actions", es_actions);
  eta->add_option("--lipschitz", es_lipschitz);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!run_config.empty()) apply_config_file(run, run_config);
    if (!compare_config.empty()) apply_config_file(compare, compare_config);
    if (!sweep_config.empty()) apply_config_file(sweep, sweep_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) {
      run_spec.solver = mfgprox::parse_solver_kind(run_solver);
      if (!run_model.empty()) run_spec.model.model_path = run_model;
      if (!run_plot.empty()) run_spec.plot_svg = run_plot;
      return mfgprox::run_experiment(run_spec, std::cerr);
    }
    if (compare->parsed()) {
      cmp_b.model = cmp_a.model;
      const auto inner_b = cmp_b.config.inner_iters;
      const auto outer_b = cmp_b.config.outer_iters;
      cmp_b.config = cmp_a.config;
      cmp_b.config.inner_iters = inner_b;
      cmp_b.config.outer_iters = outer_b;
      cmp_a.solver = mfgprox::parse_solver_kind(solver_a);
      cmp_b.solver = mfgprox::parse_solver_kind(solver_b);
      if (!model_a.empty()) cmp_a.model.model_path = model_a;
      if (!model_b.empty()) cmp_b.model.model_path = model_b;
      return mfgprox::compare_solvers(cmp_a, cmp_b, cmp_out, std::cerr);
    }
    if (sweep->parsed()) {
      sweep_spec.solver = mfgprox::parse_solver_kind(sweep_solver);
      if (!sweep_model.empty()) sweep_spec.model.model_path = sweep_model;
      const int requested =
          threads > 0 ? threads : static_cast<int>(lambdas.size());
      const int env_cap = mfgprox::worker_limit_from_env(requested);
      const int failures = mfgprox::run_sweep(
          sweep_spec, lambdas, out_dir, std::min(requested, env_cap), std::cerr);
      return failures == 0 ? 0 : 1;
    }
    if (export_model->parsed()) {
      mfgprox::save_model(export_out,
                          mfgprox::build_model(export_source, export_floor));
      return 0;
    }
    if (validate->parsed()) {
      const auto model = mfgprox::load_model(validate_path);
      const auto violations = mfgprox::validate_model(model);
      for (const auto& v : violations) std::cout << v.message << "\n";
      if (violations.empty()) std::cout << "ok\n";
      return violations.empty() ? 0 : 1;
    }
    if (eta->parsed()) {
      const auto bound = mfgprox::eta_star(es_lambda, es_sigma_min, es_horizon,
                                           es_actions, es_lipschitz);
      std::cout.precision(17);
      std::cout << "eta_star=" << bound.eta_star
                << "\nlog_eta_star=" << bound.log_eta_star
                << "\nC=" << bound.big_c << "\nlog_C=" << bound.log_big_c
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
