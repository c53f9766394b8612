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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "mfgprox/experiment.h"
#include "mfgprox/model_io.h"
#include "test_support.h"

namespace mfgprox {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mfgprox_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    fs::remove_all(path_, ignored);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells(line);
    while (std::getline(cells, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

ExperimentSpec small_spec(const fs::path& dir) {
  ExperimentSpec spec;
  spec.model.num_states = 5;
  spec.model.horizon = 4;
  spec.config.inner_iters = 10;
  spec.config.outer_iters = 3;
  spec.trace_csv = dir / "trace.csv";
  return spec;
}

TEST_CASE("trace CSV schema") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const auto rows = parse_csv(slurp(spec.trace_csv));
  REQUIRE(rows.size() == 31);
  CHECK(rows[0] == std::vector<std::string>{"outer_k", "inner_t", "exploitability",
                                             "kl_step", "wall_clock_ms"});
  int with_exploitability = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    if (!rows[i][2].empty()) {
      ++with_exploitability;
      CHECK(rows[i][1] == "10");
    }
    CHECK(rows[i][4] == "0");
    // Reals round-trip exactly.
    const double kl = std::stod(rows[i][3]);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", kl);
    CHECK(rows[i][3] == buffer);
  }
  CHECK(with_exploitability == 3);
}

TEST_CASE("trace matches the golden file") {
  TempDir dir;
  ExperimentSpec spec;
  spec.model.num_states = 4;
  spec.model.horizon = 3;
  spec.config.inner_iters = 5;
  spec.config.outer_iters = 2;
  spec.trace_csv = dir.path() / "trace.csv";
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  CHECK(slurp(spec.trace_csv) ==
        slurp(fs::path(MFGPROX_TEST_DATA_DIR) / "golden_pp_trace.csv"));
}

TEST_CASE("default proximal point run records one exploitability per outer step") {
  TempDir dir;
  ExperimentSpec spec;
  spec.trace_csv = dir.path() / "trace.csv";
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const auto rows = parse_csv(slurp(spec.trace_csv));
  int count = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i][2].empty()) ++count;
  }
  CHECK(count == 20);
}

TEST_CASE("zero inner steps gives a single initial record") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  spec.solver = SolverKind::kRmd;
  spec.config.inner_iters = 0;
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const auto rows = parse_csv(slurp(spec.trace_csv));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "0");
  CHECK(rows[1][1] == "0");
  CHECK_FALSE(rows[1][2].empty());
  CHECK(rows[1][3].empty());
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const std::string first = slurp(spec.trace_csv);
  REQUIRE(run_experiment(spec, err) == 0);
  CHECK(slurp(spec.trace_csv) == first);
}

TEST_CASE("timing column is filled on request") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  spec.write_timing = true;
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const auto rows = parse_csv(slurp(spec.trace_csv));
  CHECK(std::stod(rows.back()[4]) >= 0.0);
}

TEST_CASE("failures leave no partial outputs") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  spec.plot_svg = dir.path() / "plot.svg";
  spec.config.eta = 50.0;  // lambda eta >= 1
  std::ostringstream err;
  CHECK(run_experiment(spec, err) == 1);
  CHECK(err.str().rfind("error: ", 0) == 0);
  CHECK(fs::is_empty(dir.path()));

  spec.config.eta = 0.1;
  spec.trace_csv = dir.path() / "missing" / "trace.csv";
  std::ostringstream err2;
  CHECK(run_experiment(spec, err2) == 1);
  CHECK_FALSE(fs::exists(spec.trace_csv));

  spec.trace_csv = dir.path() / "trace.csv";
  spec.model.model_path = dir.path() / "nope.json";
  std::ostringstream err3;
  CHECK(run_experiment(spec, err3) == 1);
  CHECK(fs::is_empty(dir.path()));
}

TEST_CASE("SVG output") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  spec.plot_svg = dir.path() / "plot.svg";
  spec.probe_h = 1;
  spec.probe_s = 2;
  std::ostringstream err;
  REQUIRE(run_experiment(spec, err) == 0);
  const std::string svg = slurp(*spec.plot_svg);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);

  spec.probe_s = 99;
  std::ostringstream err2;
  CHECK(run_experiment(spec, err2) == 1);
}

TEST_CASE("compare writes one row per step budget") {
  TempDir dir;
  ExperimentSpec a = small_spec(dir.path());
  ExperimentSpec b = a;
  b.solver = SolverKind::kRmd;
  b.config.inner_iters = 30;
  b.config.exploitability_every = 10;
  const fs::path out = dir.path() / "cmp.csv";
  std::ostringstream err;
  REQUIRE(compare_solvers(a, b, out, err) == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"total_inner_steps", "exploitability_a",
                                             "exploitability_b"});
  CHECK(rows[1][0] == "10");
  CHECK(rows[3][0] == "30");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i][1].empty());
    CHECK_FALSE(rows[i][2].empty());
  }
  // Both runs share the first proximal step.
  CHECK(rows[1][1] == rows[1][2]);

  SUBCASE("identical specs give identical columns") {
    REQUIRE(compare_solvers(a, a, out, err) == 0);
    const auto same = parse_csv(slurp(out));
    for (std::size_t i = 1; i < same.size(); ++i) CHECK(same[i][1] == same[i][2]);
  }
  SUBCASE("different models are rejected") {
    ExperimentSpec other = b;
    other.model.num_states = 6;
    std::ostringstream err2;
    CHECK(compare_solvers(a, other, out, err2) != 0);
    CHECK_FALSE(fs::exists(out));
  }
}

TEST_CASE("compare on a zero-reward model file") {
  TempDir dir;
  const MfgModel zero = testing::with_reward(
      beach_bar_model(5, 4, 0.1),
      RewardModel::table(ActionTable(4, 5, 3), false));
  const fs::path model_path = dir.path() / "zero.json";
  save_model(model_path, zero);
  ExperimentSpec a = small_spec(dir.path());
  a.model.model_path = model_path;
  ExperimentSpec b = a;
  b.solver = SolverKind::kRmd;
  b.config.inner_iters = 30;
  const fs::path out = dir.path() / "cmp.csv";
  std::ostringstream err;
  REQUIRE(compare_solvers(a, b, out, err) == 0);
  const auto rows = parse_csv(slurp(out));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (int c = 1; c <= 2; ++c) {
      if (!rows[i][c].empty()) CHECK(std::abs(std::stod(rows[i][c])) <= 1e-10);
    }
  }
}

TEST_CASE("sweep writes one trace per lambda") {
  TempDir dir;
  ExperimentSpec spec = small_spec(dir.path());
  std::ostringstream err;
  const std::vector<double> lambdas{0.05, 0.1, 0.2, 0.5};
  CHECK(run_sweep(spec, lambdas, dir.path(), 3, err) == 0);
  for (const char* name : {"trace_lambda_0.05.csv", "trace_lambda_0.1.csv",
                           "trace_lambda_0.2.csv", "trace_lambda_0.5.csv"}) {
    CHECK(fs::exists(dir.path() / name));
  }
  // Same result as a sequential run.
  ExperimentSpec single = spec;
  single.config.lambda = 0.2;
  single.trace_csv = dir.path() / "single.csv";
  REQUIRE(run_experiment(single, err) == 0);
  CHECK(slurp(single.trace_csv) == slurp(dir.path() / "trace_lambda_0.2.csv"));

  CHECK(run_sweep(spec, {0.1, 50.0}, dir.path(), 2, err) == 1);
  CHECK(run_sweep(spec, lambdas, dir.path() / "absent", 2, err) == 4);
}

TEST_CASE("worker limit from the environment") {
  ::setenv("MFG_PROX_THREADS", "3", 1);
  CHECK(worker_limit_from_env(8) == 3);
  ::setenv("MFG_PROX_THREADS", "zero", 1);
  CHECK(worker_limit_from_env(8) == 8);
  ::unsetenv("MFG_PROX_THREADS");
  CHECK(worker_limit_from_env(5) == 5);
}

TEST_CASE("solver names") {
  CHECK(parse_solver_kind("pp") == SolverKind::kPp);
  CHECK(parse_solver_kind("rmd") == SolverKind::kRmd);
  CHECK(to_string(SolverKind::kPp) == "pp");
  CHECK_THROWS_AS(parse_solver_kind("sgd"), std::invalid_argument);
}

}  // namespace
}  // namespace mfgprox
