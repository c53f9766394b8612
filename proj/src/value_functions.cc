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

#include "mfgprox/value_functions.h"

#include <cmath>

#include "mfgprox/dynamics.h"

namespace mfgprox {

QTable backward_values(const MfgModel& model, const MeanFieldFlow& mu,
                       const Policy& policy, const Policy& anchor,
                       double lambda) {
  require_shape(model.matches(policy), "backward_values: policy shape");
  require_shape(model.matches(anchor), "backward_values: anchor shape");
  require_shape(model.matches(mu), "backward_values: flow shape");
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("backward_values: lambda must be >= 0");
  }
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const auto& kernel = model.transitions();
  const ActionTable rewards = reward_table(model, mu);

  QTable out{ActionTable(horizon, num_states, num_actions),
             StateTable(horizon + 1, num_states)};
  for (int h = horizon - 1; h >= 0; --h) {
    const auto continuation = out.v.row(h + 1);
    for (int s = 0; s < num_states; ++s) {
      double on_policy = 0.0;
      for (int a = 0; a < num_actions; ++a) {
        const auto p = kernel.next(h, s, a);
        double expected_next = 0.0;
        for (int t = 0; t < num_states; ++t) {
          expected_next += p[t] * continuation[t];
        }
        const double q = rewards(h, s, a) + expected_next;
        out.q(h, s, a) = q;
        on_policy += policy(h, s, a) * q;
      }
      double penalty = 0.0;
      if (lambda > 0.0) {
        const Divergence d = kl_divergence(policy.row(h, s), anchor.row(h, s));
        if (d.infinite) {
          throw SupportError(
              "backward_values: policy puts mass outside the anchor support");
        }
        penalty = lambda * d.value;
      }
      out.v(h, s) = on_policy - penalty;
    }
  }
  return out;
}

double consistency_check_j_equals_v(const MfgModel& model,
                                    const Policy& policy, const Policy& anchor,
                                    double lambda) {
  const MeanFieldFlow mu = forward_flow(model, policy);
  const double objective =
      regularized_reward(model, mu, policy, anchor, lambda);
  const QTable values = backward_values(model, mu, policy, anchor, lambda);
  double expected = 0.0;
  const auto& mu1 = model.initial_distribution();
  for (int s = 0; s < model.num_states(); ++s) {
    expected += mu1[s] * values.v(0, s);
  }
  return std::abs(objective - expected);
}

ActionTable advantage_quantity(const QTable& values, const Policy& policy,
                               const Policy& anchor, double lambda) {
  require_shape(values.q.same_shape(policy) && policy.same_shape(anchor),
                "advantage_quantity: shape mismatch");
  if (!(policy.min_entry() > 0.0) || !(anchor.min_entry() > 0.0)) {
    throw SupportError("advantage_quantity: policies need full support");
  }
  ActionTable g = values.q;
  auto& data = g.data();
  const auto& pi = policy.data();
  const auto& sigma = anchor.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] -= lambda * std::log(pi[i] / sigma[i]);
  }
  return g;
}

}  // namespace mfgprox
