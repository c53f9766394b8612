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

#ifndef MFGPROX_DYNAMICS_H_
#define MFGPROX_DYNAMICS_H_

#include <limits>
#include <span>

#include "mfgprox/model.h"
#include "mfgprox/types.h"

namespace mfgprox {

// Result of a KL divergence. `infinite` is set when the first argument puts
// mass on an action the second one excludes; `value` is then +inf.
struct Divergence {
  double value = 0.0;
  bool infinite = false;

  static Divergence infinity() {
    return {std::numeric_limits<double>::infinity(), true};
  }
};

// m[pi]: mu_0 = initial distribution and
//   mu_{h+1}(s') = sum_{s,a} pi_h(a|s) P_h(s'|s,a) mu_h(s).
MeanFieldFlow forward_flow(const MfgModel& model, const Policy& policy);

// r_h(s, a, mu_h) for every (h, s, a).
ActionTable reward_table(const MfgModel& model, const MeanFieldFlow& mu);

// J(mu, pi) = sum_h sum_{s,a} pi_h(a|s) m[pi]_h(s) r_h(s, a, mu_h).
// The state weights come from m[pi]; `mu` only enters the reward.
double cumulative_reward(const MfgModel& model, const MeanFieldFlow& mu,
                         const Policy& policy);

// J(mu, pi) - lambda * D_{m[pi]}(pi, anchor). Throws SupportError when the
// anchor has a zero entry.
double regularized_reward(const MfgModel& model, const MeanFieldFlow& mu,
                          const Policy& policy, const Policy& anchor,
                          double lambda);

// KL(p || q) with 0 log(0/q) = 0.
Divergence kl_divergence(std::span<const double> p, std::span<const double> q);

// D_w(pi, anchor) = sum_h E_{s ~ w_h} KL(pi_h(s) || anchor_h(s)). States of
// zero weight are skipped entirely.
Divergence weighted_kl(const MeanFieldFlow& weights, const Policy& policy,
                       const Policy& anchor);

// l1 distance sum_x |p(x) - q(x)| (no factor 1/2).
double tv_distance(std::span<const double> p, std::span<const double> q);

}  // namespace mfgprox

#endif  // MFGPROX_DYNAMICS_H_
