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

#include "mfgprox/solvers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mfgprox/dynamics.h"
#include "mfgprox/evaluation.h"
#include "mfgprox/value_functions.h"

namespace mfgprox {

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("SolverConfig: lambda must be >= 0");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("SolverConfig: eta must be positive");
  }
  if (!(lambda * eta < 1.0)) {
    throw std::invalid_argument("SolverConfig: lambda * eta must be < 1");
  }
  if (inner_iters < 0 || outer_iters < 0) {
    throw std::invalid_argument("SolverConfig: iteration counts must be >= 0");
  }
  if (record_every < 1) {
    throw std::invalid_argument("SolverConfig: record_every must be >= 1");
  }
  if (exploitability_every < 0) {
    throw std::invalid_argument(
        "SolverConfig: exploitability_every must be >= 0");
  }
  if (!(mu_floor > 0.0)) {
    throw std::invalid_argument("SolverConfig: mu_floor must be positive");
  }
}

namespace {

void check_step_arguments(const Policy& policy, const Policy& anchor,
                          double lambda, double eta) {
  if (!(policy.min_entry() > 0.0)) {
    throw SupportError("rmd: policy must have full support");
  }
  if (!(anchor.min_entry() > 0.0)) {
    throw SupportError("rmd: anchor must have full support");
  }
  if (!(lambda >= 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument("rmd: need lambda >= 0 and eta > 0");
  }
  if (!(lambda * eta < 1.0)) {
    throw std::invalid_argument("rmd: lambda * eta must be < 1");
  }
}

struct StepOutcome {
  Policy next;
  MeanFieldFlow flow;
};

StepOutcome step_with_flow(const MfgModel& model, const Policy& policy,
                           const Policy& anchor, double lambda, double eta) {
  check_step_arguments(policy, anchor, lambda, eta);
  MeanFieldFlow flow = forward_flow(model, policy);
  const QTable values = backward_values(model, flow, policy, anchor, lambda);
  return {rmd_update(values.q, policy, anchor, lambda, eta), std::move(flow)};
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

SolveResult run_inner_loop(const MfgModel& model, const Policy& init,
                           const Policy& anchor, const SolverConfig& config,
                           int outer_k, Clock::time_point start,
                           const IterateObserver& observer) {
  SolveResult result{init, {}};
  const int steps = config.inner_iters;
  if (steps == 0) {
    result.trace.records.push_back(
        {outer_k, 0, exploitability(model, init), std::nullopt,
         elapsed_ms(start)});
    return result;
  }
  for (int t = 1; t <= steps; ++t) {
    StepOutcome outcome = step_with_flow(model, result.policy, anchor,
                                         config.lambda, config.eta);
    const Divergence kl =
        weighted_kl(outcome.flow, outcome.next, result.policy);
    result.policy = std::move(outcome.next);

    const bool last = t == steps;
    const bool want_exploitability =
        last || (config.exploitability_every > 0 &&
                 t % config.exploitability_every == 0);
    if (last || t % config.record_every == 0 || want_exploitability) {
      TraceRecord record{outer_k, t, std::nullopt, kl.value, 0.0};
      if (want_exploitability) {
        record.exploitability = exploitability(model, result.policy);
      }
      record.wall_clock_ms = elapsed_ms(start);
      result.trace.records.push_back(record);
      if (observer) observer(outer_k, t, result.policy);
    }
  }
  return result;
}

}  // namespace

Policy rmd_update(const ActionTable& q, const Policy& policy,
                  const Policy& anchor, double lambda, double eta) {
  require_shape(q.same_shape(policy) && policy.same_shape(anchor),
                "rmd_update: shape mismatch");
  check_step_arguments(policy, anchor, lambda, eta);
  const double anchor_weight = lambda * eta;
  const double policy_weight = 1.0 - lambda * eta;
  const int num_actions = policy.num_actions();

  Policy next(policy.horizon(), policy.num_states(), num_actions);
  std::vector<double> logits(num_actions);
  for (int h = 0; h < policy.horizon(); ++h) {
    for (int s = 0; s < policy.num_states(); ++s) {
      for (int a = 0; a < num_actions; ++a) {
        logits[a] = anchor_weight * std::log(anchor(h, s, a)) +
                    policy_weight * std::log(policy(h, s, a)) +
                    eta * q(h, s, a);
      }
      const double normalizer = log_sum_exp(logits);
      auto row = next.row(h, s);
      for (int a = 0; a < num_actions; ++a) {
        row[a] = std::exp(logits[a] - normalizer);
        if (!(row[a] > 0.0) || !std::isfinite(row[a])) {
          throw NumericalError("rmd_update: policy entry left (0, 1] at h=" +
                               std::to_string(h) + " s=" + std::to_string(s));
        }
      }
    }
  }
  return next;
}

Policy rmd_step(const MfgModel& model, const Policy& policy,
                const Policy& anchor, double lambda, double eta) {
  return step_with_flow(model, policy, anchor, lambda, eta).next;
}

double rmd_first_order_residual(const MfgModel& model,
                                const Policy& old_policy,
                                const Policy& new_policy, const Policy& anchor,
                                double lambda, double eta) {
  require_shape(model.matches(old_policy) && model.matches(new_policy) &&
                    model.matches(anchor),
                "rmd_first_order_residual: shape mismatch");
  const MeanFieldFlow flow = forward_flow(model, old_policy);
  const QTable values = backward_values(model, flow, old_policy, anchor, lambda);
  const double keep = 1.0 - lambda * eta;
  double worst = 0.0;
  for (int h = 0; h < model.horizon(); ++h) {
    for (int s = 0; s < model.num_states(); ++s) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int a = 0; a < model.num_actions(); ++a) {
        const double fresh = new_policy(h, s, a);
        const double v =
            eta * (values.q(h, s, a) - lambda * std::log(fresh / anchor(h, s, a))) -
            keep * std::log(fresh / old_policy(h, s, a));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      worst = std::max(worst, hi - lo);
    }
  }
  return worst;
}

SolveResult rmd_solve(const MfgModel& model, const Policy& init,
                      const Policy& anchor, const SolverConfig& config,
                      const IterateObserver& observer) {
  config.validate();
  require_shape(model.matches(init) && model.matches(anchor),
                "rmd_solve: policy shape mismatch");
  const auto start = Clock::now();
  if (observer) observer(0, 0, init);
  return run_inner_loop(model, init, anchor, config, 0, start, observer);
}

SolveResult pp_solve(const MfgModel& model, const Policy& init,
                     const SolverConfig& config,
                     const IterateObserver& observer) {
  config.validate();
  require_shape(model.matches(init), "pp_solve: policy shape mismatch");
  if (!(init.min_entry() > 0.0)) {
    throw SupportError("pp_solve: initial policy must have full support");
  }
  const auto start = Clock::now();
  if (observer) observer(0, 0, init);

  SolveResult result{init, {}};
  if (config.outer_iters == 0) {
    result.trace.records.push_back(
        {0, 0, exploitability(model, init), std::nullopt, elapsed_ms(start)});
    return result;
  }
  for (int k = 0; k < config.outer_iters; ++k) {
    const Policy anchor = result.policy;
    SolveResult inner =
        run_inner_loop(model, anchor, anchor, config, k, start, observer);
    result.policy = std::move(inner.policy);
    auto& records = result.trace.records;
    records.insert(records.end(), inner.trace.records.begin(),
                   inner.trace.records.end());
  }
  return result;
}

namespace {

// log(exp(x) + exp(y)) without overflow.
double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

}  // namespace

EtaStar eta_star(double lambda, double sigma_min, int horizon,
                 int num_actions, double lipschitz) {
  if (!(sigma_min > 0.0) || sigma_min > 1.0) {
    throw std::domain_error("eta_star: sigma_min must lie in (0, 1]");
  }
  if (!(lambda > 0.0) || horizon < 1 || num_actions < 1 ||
      !(lipschitz >= 0.0)) {
    throw std::domain_error(
        "eta_star: need lambda > 0, horizon >= 1, |A| >= 1, L >= 0");
  }
  const double H = horizon;
  const double log_actions = std::log(static_cast<double>(num_actions));
  const double log_sigma = std::log(sigma_min);
  const double exponent = H * (1.0 - lambda * log_sigma) / lambda;

  // C^{lambda,sigma,H,|A|}: exponential part plus a positive polynomial part.
  const double log_exponential_part =
      std::log(2.0 * lambda * num_actions) + exponent;
  const double polynomial_part = 2.0 * (1.0 + H) -
                                 lambda * (1.0 + 2.0 * H) * log_sigma +
                                 2.0 * lambda * log_actions;
  const double log_step =
      log_add_exp(log_exponential_part, safe_log(polynomial_part));

  // C = 4 H^2 (L^2 H^2 + step^2 / (|A| e^E)).
  const double log_ratio = 2.0 * log_step - log_actions - exponent;
  const double log_big_c =
      std::log(4.0 * H * H) +
      log_add_exp(2.0 * safe_log(lipschitz * H), log_ratio);

  const double log_first =
      -std::log(2.0 * H) - log_add_exp(safe_log(lipschitz), log_step);
  const double log_second = std::log(lambda / 2.0) - log_big_c;

  EtaStar out;
  out.log_step_constant = log_step;
  out.log_big_c = log_big_c;
  out.log_eta_star = std::min(log_first, log_second);
  out.big_c = std::exp(log_big_c);
  out.eta_star = std::exp(out.log_eta_star);
  // Round the bound down until C eta* <= lambda / 2 holds in floating point.
  if (std::isfinite(out.big_c)) {
    while (out.eta_star > 0.0 && out.big_c * out.eta_star > lambda / 2.0) {
      out.eta_star = std::nextafter(out.eta_star, 0.0);
    }
  }
  return out;
}

namespace {

// Log-policy rows, normalized so that each row exponentiates to a
// distribution.
void normalize_log_rows(ActionTable& log_policy) {
  for (int h = 0; h < log_policy.horizon(); ++h) {
    for (int s = 0; s < log_policy.num_states(); ++s) {
      auto row = log_policy.row(h, s);
      const double shift = log_sum_exp(row);
      for (double& x : row) x -= shift;
    }
  }
}

Policy exp_policy(const ActionTable& log_policy) {
  Policy out(log_policy.horizon(), log_policy.num_states(),
             log_policy.num_actions());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = std::exp(log_policy.data()[i]);
  }
  return out;
}

// d/dt log pi = G - <G, pi>, evaluated at softmax of `log_policy`.
ActionTable flow_velocity(const MfgModel& model, ActionTable log_policy,
                          const Policy& anchor, double lambda) {
  normalize_log_rows(log_policy);
  const Policy policy = exp_policy(log_policy);
  if (!(policy.min_entry() > 0.0)) {
    throw NumericalError("mirror_flow_integrate: policy lost full support");
  }
  const MeanFieldFlow flow = forward_flow(model, policy);
  const QTable values = backward_values(model, flow, policy, anchor, lambda);
  ActionTable g = advantage_quantity(values, policy, anchor, lambda);
  for (int h = 0; h < g.horizon(); ++h) {
    for (int s = 0; s < g.num_states(); ++s) {
      auto row = g.row(h, s);
      const auto p = policy.row(h, s);
      double mean = 0.0;
      for (int a = 0; a < g.num_actions(); ++a) mean += p[a] * row[a];
      for (double& x : row) x -= mean;
    }
  }
  return g;
}

ActionTable axpy(const ActionTable& base, double scale,
                 const ActionTable& direction) {
  ActionTable out = base;
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] += scale * direction.data()[i];
  }
  return out;
}

}  // namespace

std::vector<FlowSample> mirror_flow_integrate(const MfgModel& model,
                                              const Policy& init,
                                              const Policy& anchor,
                                              double lambda, double dt,
                                              double t_end,
                                              int sample_stride) {
  require_shape(model.matches(init) && model.matches(anchor),
                "mirror_flow_integrate: policy shape mismatch");
  if (!(init.min_entry() > 0.0) || !(anchor.min_entry() > 0.0)) {
    throw SupportError(
        "mirror_flow_integrate: init and anchor need full support");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("mirror_flow_integrate: lambda must be > 0");
  }
  if (!(dt > 0.0) || dt > 1e-2) {
    throw std::invalid_argument("mirror_flow_integrate: need 0 < dt <= 1e-2");
  }
  if (!(t_end > 0.0) || sample_stride < 1) {
    throw std::invalid_argument(
        "mirror_flow_integrate: need t_end > 0 and sample_stride >= 1");
  }
  const long long steps = std::llround(t_end / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - t_end) >
                       1e-9 * std::max(1.0, t_end)) {
    throw std::invalid_argument(
        "mirror_flow_integrate: t_end must be a multiple of dt");
  }

  ActionTable y(init.horizon(), init.num_states(), init.num_actions());
  for (std::size_t i = 0; i < y.data().size(); ++i) {
    y.data()[i] = std::log(init.data()[i]);
  }
  normalize_log_rows(y);

  std::vector<FlowSample> samples;
  samples.push_back({0.0, exp_policy(y)});
  for (long long n = 1; n <= steps; ++n) {
    const ActionTable k1 = flow_velocity(model, y, anchor, lambda);
    const ActionTable k2 =
        flow_velocity(model, axpy(y, dt / 2.0, k1), anchor, lambda);
    const ActionTable k3 =
        flow_velocity(model, axpy(y, dt / 2.0, k2), anchor, lambda);
    const ActionTable k4 = flow_velocity(model, axpy(y, dt, k3), anchor, lambda);
    for (std::size_t i = 0; i < y.data().size(); ++i) {
      y.data()[i] += dt / 6.0 *
                     (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] +
                      k4.data()[i]);
      if (!std::isfinite(y.data()[i])) {
        throw NumericalError("mirror_flow_integrate: non-finite state at t=" +
                             std::to_string(static_cast<double>(n) * dt));
      }
    }
    normalize_log_rows(y);
    if (n % sample_stride == 0 || n == steps) {
      samples.push_back({static_cast<double>(n) * dt, exp_policy(y)});
    }
  }
  return samples;
}

}  // namespace mfgprox
