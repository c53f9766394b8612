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

#ifndef MFGPROX_SOLVERS_H_
#define MFGPROX_SOLVERS_H_

#include <functional>
#include <optional>
#include <vector>

#include "mfgprox/model.h"
#include "mfgprox/types.h"

namespace mfgprox {

struct SolverConfig {
  double lambda = 0.1;     // KL regularization strength
  double eta = 0.1;        // mirror descent learning rate
  int inner_iters = 100;   // RMD steps per outer iteration
  int outer_iters = 20;    // proximal point (anchor) updates
  double mu_floor = 1e-9;  // forwarded to benchmark rewards
  int record_every = 1;    // trace stride for inner-step records
  // Stride for intermediate exploitability records inside an inner loop;
  // 0 records it only once, when the inner loop ends.
  int exploitability_every = 0;

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct TraceRecord {
  int outer_k = 0;
  int inner_t = 0;
  std::optional<double> exploitability;
  // D_{m[pi^t]}(pi^{t+1}, pi^t) for the step that ended at inner_t.
  std::optional<double> kl_step;
  double wall_clock_ms = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
};

struct SolveResult {
  Policy policy;
  ConvergenceTrace trace;
};

// Called with the initial policy (outer 0, inner 0) and after every recorded
// inner step.
using IterateObserver =
    std::function<void(int outer_k, int inner_t, const Policy& policy)>;

// Closed-form mirror descent update for a given Q table, in log space:
//   log pi'_h(a|s) = lambda eta log anchor + (1 - lambda eta) log pi
//                    + eta Q_h(s, a) - logsumexp(...).
Policy rmd_update(const ActionTable& q, const Policy& policy,
                  const Policy& anchor, double lambda, double eta);

// One regularized mirror descent step: evaluates Q^{lambda,anchor} of
// `policy` against its own flow and applies rmd_update.
Policy rmd_step(const MfgModel& model, const Policy& policy,
                const Policy& anchor, double lambda, double eta);

// Max over (h, s) of the spread max_a v - min_a v of
//   v(a) = eta (Q(s,a) - lambda log(new/anchor)) - (1 - lambda eta) log(new/old),
// with Q evaluated at old_policy. Zero iff new_policy is the exact update.
double rmd_first_order_residual(const MfgModel& model,
                                const Policy& old_policy,
                                const Policy& new_policy, const Policy& anchor,
                                double lambda, double eta);

// config.inner_iters RMD steps from `init` with a fixed anchor.
SolveResult rmd_solve(const MfgModel& model, const Policy& init,
                      const Policy& anchor, const SolverConfig& config,
                      const IterateObserver& observer = {});

// Proximal point outer loop: sigma^0 = init and
// sigma^{k+1} = rmd_solve(model, sigma^k, sigma^k, config).policy.
SolveResult pp_solve(const MfgModel& model, const Policy& init,
                     const SolverConfig& config,
                     const IterateObserver& observer = {});

// Learning-rate bound of the RMD contraction result and its constant C.
// The log-domain fields are exact to double precision for any input;
// `big_c` overflows to +inf and `eta_star` underflows to 0 long before the
// logs lose meaning.
struct EtaStar {
  double eta_star = 0.0;
  double big_c = 0.0;
  double log_eta_star = 0.0;
  double log_big_c = 0.0;
  // log of the per-step constant 2 lambda |A| e^E + 2(1+H)
  //   - lambda (1+2H) log sigma_min + 2 lambda log |A|,
  // with E = H (1 - lambda log sigma_min) / lambda.
  double log_step_constant = 0.0;
};

EtaStar eta_star(double lambda, double sigma_min, int horizon,
                 int num_actions, double lipschitz);

struct FlowSample {
  double time = 0.0;
  Policy policy;
};

// Integrates the centered mirror flow
//   d/dt pi_h(a|s) = pi_h(a|s) (G_h(s,a) - <G_h(s,.), pi_h(s)>)
// with G from advantage_quantity, using classical RK4 on log pi followed by
// per-step renormalization. Returns the state every `sample_stride` steps,
// always including t = 0 and t = t_end. t_end must be a whole number of
// steps of size dt <= 1e-2.
std::vector<FlowSample> mirror_flow_integrate(const MfgModel& model,
                                              const Policy& init,
                                              const Policy& anchor,
                                              double lambda, double dt,
                                              double t_end,
                                              int sample_stride = 1);

}  // namespace mfgprox

#endif  // MFGPROX_SOLVERS_H_
