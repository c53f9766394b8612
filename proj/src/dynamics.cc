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

#include "mfgprox/dynamics.h"

#include <algorithm>
#include <cmath>

namespace mfgprox {

MeanFieldFlow forward_flow(const MfgModel& model, const Policy& policy) {
  require_shape(model.matches(policy), "forward_flow: policy shape mismatch");
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const auto& kernel = model.transitions();

  MeanFieldFlow mu(horizon, num_states);
  const auto& mu1 = model.initial_distribution();
  std::copy(mu1.begin(), mu1.end(), mu.row(0).begin());
  for (int h = 0; h + 1 < horizon; ++h) {
    auto next = mu.row(h + 1);
    for (int s = 0; s < num_states; ++s) {
      const double mass = mu(h, s);
      if (mass == 0.0) continue;
      for (int a = 0; a < num_actions; ++a) {
        const double weight = mass * policy(h, s, a);
        if (weight == 0.0) continue;
        const auto p = kernel.next(h, s, a);
        for (int t = 0; t < num_states; ++t) next[t] += weight * p[t];
      }
    }
  }
  return mu;
}

ActionTable reward_table(const MfgModel& model, const MeanFieldFlow& mu) {
  require_shape(model.matches(mu), "reward_table: flow shape mismatch");
  ActionTable rewards(model.horizon(), model.num_states(), model.num_actions());
  const auto& reward = model.reward();
  for (int h = 0; h < model.horizon(); ++h) {
    const auto mu_h = mu.row(h);
    for (int s = 0; s < model.num_states(); ++s) {
      for (int a = 0; a < model.num_actions(); ++a) {
        rewards(h, s, a) = reward(h, s, a, mu_h);
      }
    }
  }
  return rewards;
}

double cumulative_reward(const MfgModel& model, const MeanFieldFlow& mu,
                         const Policy& policy) {
  require_shape(model.matches(policy),
                "cumulative_reward: policy shape mismatch");
  const ActionTable rewards = reward_table(model, mu);
  const MeanFieldFlow weights = forward_flow(model, policy);
  double total = 0.0;
  for (int h = 0; h < model.horizon(); ++h) {
    for (int s = 0; s < model.num_states(); ++s) {
      double expected = 0.0;
      for (int a = 0; a < model.num_actions(); ++a) {
        expected += policy(h, s, a) * rewards(h, s, a);
      }
      total += weights(h, s) * expected;
    }
  }
  return total;
}

double regularized_reward(const MfgModel& model, const MeanFieldFlow& mu,
                          const Policy& policy, const Policy& anchor,
                          double lambda) {
  require_shape(model.matches(anchor),
                "regularized_reward: anchor shape mismatch");
  if (!(anchor.min_entry() > 0.0)) {
    throw SupportError("regularized_reward: anchor must have full support");
  }
  const double base = cumulative_reward(model, mu, policy);
  if (lambda == 0.0) return base;
  const Divergence d = weighted_kl(forward_flow(model, policy), policy, anchor);
  return base - lambda * d.value;
}

Divergence kl_divergence(std::span<const double> p,
                         std::span<const double> q) {
  require_shape(p.size() == q.size(), "kl_divergence: length mismatch");
  // Summed as q * phi(p / q) with phi(x) = x log x - x + 1 >= 0; equal to
  // sum p log(p / q) for normalized inputs, but every term stays >= 0.
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      total += q[i];
      continue;
    }
    if (q[i] == 0.0) return Divergence::infinity();
    const double term = p[i] * std::log(p[i] / q[i]) - p[i] + q[i];
    total += std::max(term, 0.0);
  }
  return {total, false};
}

Divergence weighted_kl(const MeanFieldFlow& weights, const Policy& policy,
                       const Policy& anchor) {
  require_shape(policy.same_shape(anchor), "weighted_kl: policy/anchor shape");
  require_shape(weights.horizon() == policy.horizon() &&
                    weights.num_states() == policy.num_states(),
                "weighted_kl: weight shape mismatch");
  double total = 0.0;
  for (int h = 0; h < policy.horizon(); ++h) {
    for (int s = 0; s < policy.num_states(); ++s) {
      const double w = weights(h, s);
      if (w == 0.0) continue;
      const Divergence d = kl_divergence(policy.row(h, s), anchor.row(h, s));
      if (d.infinite) return d;
      total += w * d.value;
    }
  }
  return {total, false};
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  require_shape(p.size() == q.size(), "tv_distance: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return total;
}

}  // namespace mfgprox
