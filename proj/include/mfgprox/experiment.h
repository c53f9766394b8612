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

#ifndef MFGPROX_EXPERIMENT_H_
#define MFGPROX_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfgprox/model.h"
#include "mfgprox/solvers.h"

namespace mfgprox {

struct ModelSource {
  // Builtin benchmark name; ignored when model_path is set.
  std::string benchmark = "beach-bar";
  int num_states = 10;
  int horizon = 10;
  double epsilon = 0.1;
  std::optional<std::filesystem::path> model_path;
};

enum class SolverKind { kRmd, kPp };

SolverKind parse_solver_kind(const std::string& name);
std::string to_string(SolverKind kind);

struct ExperimentSpec {
  ModelSource model;
  SolverKind solver = SolverKind::kPp;
  SolverConfig config;
  std::filesystem::path trace_csv = "trace.csv";
  std::optional<std::filesystem::path> plot_svg;
  // (h, s) cell whose action distribution is drawn in the SVG.
  int probe_h = 0;
  int probe_s = 0;
  // Seed and sample count for the optional monotonicity diagnostic.
  std::uint64_t rng_seed = 0;
  int monotonicity_samples = 0;
  // Wall-clock columns make traces irreproducible, so they are written as 0
  // unless requested.
  bool write_timing = false;
};

MfgModel build_model(const ModelSource& source, double mu_floor);

struct ProbePoint {
  long long total_steps = 0;
  std::vector<double> probabilities;
};

struct ExperimentOutcome {
  SolveResult result;
  std::vector<ProbePoint> probe_path;
};

// Builds the model, checks it and runs the selected solver from the uniform
// policy. Throws on invalid specs; writes no files.
ExperimentOutcome execute_experiment(const ExperimentSpec& spec);

// Header `outer_k,inner_t,exploitability,kl_step,wall_clock_ms`; reals use
// 17 significant digits; unrecorded values are left empty.
std::string trace_to_csv(const ConvergenceTrace& trace, bool write_timing);

// Cumulative inner-step count of a record.
long long total_steps(const TraceRecord& record, int inner_iters);

// Runs the experiment and writes the trace CSV (and SVG when requested).
// Returns 0 on success; otherwise prints one diagnostic line to `err`,
// removes partially written outputs and returns non-zero.
int run_experiment(const ExperimentSpec& spec, std::ostream& err);

// Header `total_inner_steps,exploitability_a,exploitability_b`, one row per
// step count at which either run recorded exploitability.
std::string comparison_csv(const ConvergenceTrace& a, int inner_iters_a,
                           const ConvergenceTrace& b, int inner_iters_b);

// Runs both specs on the same model and writes comparison_csv to `out`.
// Fails (non-zero) when the two specs describe different models.
int compare_solvers(const ExperimentSpec& spec_a, const ExperimentSpec& spec_b,
                    const std::filesystem::path& out, std::ostream& err);

// Runs one experiment per lambda, writing `trace_lambda_<value>.csv` under
// `out_dir`, with at most `max_workers` running at once. Returns the number
// of failed runs.
int run_sweep(const ExperimentSpec& base, const std::vector<double>& lambdas,
              const std::filesystem::path& out_dir, int max_workers,
              std::ostream& err);

// Worker cap from MFG_PROX_THREADS, or `fallback` when unset or invalid.
int worker_limit_from_env(int fallback);

}  // namespace mfgprox

#endif  // MFGPROX_EXPERIMENT_H_
