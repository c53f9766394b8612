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

#include "mfgprox/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mfgprox/evaluation.h"
#include "mfgprox/model_io.h"
#include "mfgprox/svg_plot.h"

namespace mfgprox {

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "rmd") return SolverKind::kRmd;
  if (name == "pp") return SolverKind::kPp;
  throw std::invalid_argument("unknown solver '" + name +
                              "' (expected rmd or pp)");
}

std::string to_string(SolverKind kind) {
  return kind == SolverKind::kRmd ? "rmd" : "pp";
}

MfgModel build_model(const ModelSource& source, double mu_floor) {
  if (source.model_path) return load_model(*source.model_path);
  if (source.benchmark == "beach-bar") {
    return beach_bar_model(source.num_states, source.horizon, source.epsilon,
                           mu_floor);
  }
  throw std::invalid_argument("unknown benchmark '" + source.benchmark + "'");
}

namespace {

void check_model(const MfgModel& model) {
  const auto violations = validate_model(model);
  if (!violations.empty()) {
    std::ostringstream out;
    out << "invalid model: " << violations.front().message;
    if (violations.size() > 1) {
      out << " (+" << violations.size() - 1 << " more)";
    }
    throw std::invalid_argument(out.str());
  }
}

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path,
                           const std::string& content) {
  if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path())) {
    throw std::runtime_error("output directory does not exist: " +
                             path.parent_path().string());
  }
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void remove_quietly(const std::filesystem::path& path) {
  std::error_code ignored;
  std::filesystem::remove(path, ignored);
  std::filesystem::path tmp = path;
  tmp += ".partial";
  std::filesystem::remove(tmp, ignored);
}

}  // namespace

ExperimentOutcome execute_experiment(const ExperimentSpec& spec) {
  spec.config.validate();
  const MfgModel model = build_model(spec.model, spec.config.mu_floor);
  check_model(model);
  if (spec.probe_h < 0 || spec.probe_h >= model.horizon() || spec.probe_s < 0 ||
      spec.probe_s >= model.num_states()) {
    throw std::invalid_argument("probe cell (h, s) is outside the model");
  }
  if (spec.monotonicity_samples > 0) {
    const double worst =
        check_weak_monotonicity(model, spec.monotonicity_samples, spec.rng_seed);
    if (worst > 1e-10) {
      std::cerr << "warning: weak monotonicity violated, worst sum "
                << format_real(worst) << "\n";
    }
  }

  const int inner = spec.config.inner_iters;
  ExperimentOutcome outcome;
  const IterateObserver observer = [&](int outer_k, int inner_t,
                                       const Policy& policy) {
    const auto row = policy.row(spec.probe_h, spec.probe_s);
    outcome.probe_path.push_back(
        {static_cast<long long>(outer_k) * inner + inner_t,
         std::vector<double>(row.begin(), row.end())});
  };
  const Policy init = Policy::uniform(model.horizon(), model.num_states(),
                                      model.num_actions());
  if (spec.solver == SolverKind::kPp) {
    outcome.result = pp_solve(model, init, spec.config, observer);
  } else {
    outcome.result = rmd_solve(model, init, init, spec.config, observer);
  }
  return outcome;
}

std::string trace_to_csv(const ConvergenceTrace& trace, bool write_timing) {
  std::string out = "outer_k,inner_t,exploitability,kl_step,wall_clock_ms\n";
  for (const TraceRecord& r : trace.records) {
    out += std::to_string(r.outer_k);
    out += ',';
    out += std::to_string(r.inner_t);
    out += ',';
    if (r.exploitability) out += format_real(*r.exploitability);
    out += ',';
    if (r.kl_step) out += format_real(*r.kl_step);
    out += ',';
    out += format_real(write_timing ? r.wall_clock_ms : 0.0);
    out += '\n';
  }
  return out;
}

long long total_steps(const TraceRecord& record, int inner_iters) {
  return static_cast<long long>(record.outer_k) * inner_iters + record.inner_t;
}

int run_experiment(const ExperimentSpec& spec, std::ostream& err) {
  try {
    const ExperimentOutcome outcome = execute_experiment(spec);
    write_file_atomically(spec.trace_csv,
                          trace_to_csv(outcome.result.trace, spec.write_timing));
    if (spec.plot_svg) {
      try {
        std::ostringstream title;
        title << to_string(spec.solver) << " lambda=" << spec.config.lambda
              << " eta=" << spec.config.eta
              << " inner=" << spec.config.inner_iters;
        if (spec.solver == SolverKind::kPp) {
          title << " outer=" << spec.config.outer_iters;
        }
        write_file_atomically(
            *spec.plot_svg,
            render_experiment_svg(outcome.result.trace, spec.config.inner_iters,
                                  outcome.probe_path, title.str()));
      } catch (...) {
        remove_quietly(spec.trace_csv);
        throw;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    remove_quietly(spec.trace_csv);
    if (spec.plot_svg) remove_quietly(*spec.plot_svg);
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

std::string comparison_csv(const ConvergenceTrace& a, int inner_iters_a,
                           const ConvergenceTrace& b, int inner_iters_b) {
  std::map<long long, std::pair<std::optional<double>, std::optional<double>>>
      rows;
  for (const TraceRecord& r : a.records) {
    if (r.exploitability) {
      rows[total_steps(r, inner_iters_a)].first = r.exploitability;
    }
  }
  for (const TraceRecord& r : b.records) {
    if (r.exploitability) {
      rows[total_steps(r, inner_iters_b)].second = r.exploitability;
    }
  }
  std::string out = "total_inner_steps,exploitability_a,exploitability_b\n";
  for (const auto& [steps, values] : rows) {
    out += std::to_string(steps);
    out += ',';
    if (values.first) out += format_real(*values.first);
    out += ',';
    if (values.second) out += format_real(*values.second);
    out += '\n';
  }
  return out;
}

int compare_solvers(const ExperimentSpec& spec_a, const ExperimentSpec& spec_b,
                    const std::filesystem::path& out, std::ostream& err) {
  try {
    const MfgModel model_a = build_model(spec_a.model, spec_a.config.mu_floor);
    const MfgModel model_b = build_model(spec_b.model, spec_b.config.mu_floor);
    if (model_to_json(model_a) != model_to_json(model_b)) {
      throw std::invalid_argument("compare: the two specs use different models");
    }
    const ExperimentOutcome a = execute_experiment(spec_a);
    const ExperimentOutcome b = execute_experiment(spec_b);
    write_file_atomically(
        out, comparison_csv(a.result.trace, spec_a.config.inner_iters,
                            b.result.trace, spec_b.config.inner_iters));
    return 0;
  } catch (const std::exception& e) {
    remove_quietly(out);
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int worker_limit_from_env(int fallback) {
  const char* raw = std::getenv("MFG_PROX_THREADS");
  if (raw == nullptr) return fallback;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1) return fallback;
  return static_cast<int>(value);
}

int run_sweep(const ExperimentSpec& base, const std::vector<double>& lambdas,
              const std::filesystem::path& out_dir, int max_workers,
              std::ostream& err) {
  if (!std::filesystem::is_directory(out_dir)) {
    err << "error: output directory does not exist: " << out_dir.string()
        << "\n";
    return static_cast<int>(lambdas.size());
  }
  const int workers = std::max(
      1, std::min<int>(max_workers, static_cast<int>(lambdas.size())));
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex err_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++) {
      ExperimentSpec spec = base;
      spec.config.lambda = lambdas[i];
      char name[64];
      std::snprintf(name, sizeof(name), "trace_lambda_%g.csv", lambdas[i]);
      spec.trace_csv = out_dir / name;
      spec.plot_svg.reset();
      std::ostringstream local_err;
      if (run_experiment(spec, local_err) != 0) {
        ++failures;
        std::lock_guard<std::mutex> lock(err_mutex);
        err << local_err.str();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return failures.load();
}

}  // namespace mfgprox
