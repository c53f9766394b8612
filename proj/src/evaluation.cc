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

#include "mfgprox/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfgprox/dynamics.h"

namespace mfgprox {

BestResponseResult best_response(const MfgModel& model,
                                 const MeanFieldFlow& mu) {
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const auto& kernel = model.transitions();
  const ActionTable rewards = reward_table(model, mu);

  BestResponseResult result{Policy(horizon, num_states, num_actions), 0.0};
  std::vector<double> value(num_states, 0.0);
  std::vector<double> next_value(num_states, 0.0);
  for (int h = horizon - 1; h >= 0; --h) {
    for (int s = 0; s < num_states; ++s) {
      int best_action = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < num_actions; ++a) {
        const auto p = kernel.next(h, s, a);
        double q = rewards(h, s, a);
        for (int t = 0; t < num_states; ++t) q += p[t] * next_value[t];
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      result.policy(h, s, best_action) = 1.0;
      value[s] = best;
    }
    std::swap(value, next_value);
  }
  const auto& mu1 = model.initial_distribution();
  for (int s = 0; s < num_states; ++s) result.value += mu1[s] * next_value[s];
  return result;
}

double exploitability(const MfgModel& model, const Policy& policy) {
  const MeanFieldFlow mu = forward_flow(model, policy);
  return best_response(model, mu).value - cumulative_reward(model, mu, policy);
}

double distance_to_policy_set(const Policy& policy,
                              const std::vector<Policy>& reference_set) {
  if (reference_set.empty()) {
    throw std::invalid_argument("distance_to_policy_set: empty reference set");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Policy& reference : reference_set) {
    require_shape(reference.same_shape(policy),
                  "distance_to_policy_set: shape mismatch");
    double distance = 0.0;
    for (int h = 0; h < policy.horizon(); ++h) {
      for (int s = 0; s < policy.num_states(); ++s) {
        distance += tv_distance(policy.row(h, s), reference.row(h, s));
      }
    }
    best = std::min(best, distance);
  }
  return best;
}

namespace {

constexpr double kMaxCandidates = 1e6;

// Every way to split `total` units among `parts` slots.
void compositions(int total, int parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current.push_back(k);
    compositions(total - k, parts - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

double brute_force_equilibrium_check(const MfgModel& model,
                                     const Policy& policy,
                                     int grid_resolution) {
  require_shape(model.matches(policy),
                "brute_force_equilibrium_check: policy shape mismatch");
  if (grid_resolution < 1) {
    throw std::invalid_argument(
        "brute_force_equilibrium_check: grid_resolution must be >= 1");
  }
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const int cells = horizon * num_states;

  const double deterministic_count =
      std::pow(static_cast<double>(num_actions), cells);
  std::vector<std::vector<int>> grid;
  std::vector<int> scratch;
  // Binomial(grid_resolution + A - 1, A - 1) grows fast; bound it first.
  double grid_count = 1.0;
  for (int i = 1; i < num_actions; ++i) {
    grid_count *= static_cast<double>(grid_resolution + i) / i;
  }
  if (deterministic_count + grid_count > kMaxCandidates) {
    throw std::invalid_argument(
        "brute_force_equilibrium_check: instance too large for enumeration");
  }
  compositions(grid_resolution, num_actions, scratch, grid);

  const MeanFieldFlow mu = forward_flow(model, policy);
  const double baseline = cumulative_reward(model, mu, policy);
  double best = -std::numeric_limits<double>::infinity();

  Policy candidate(horizon, num_states, num_actions);
  std::vector<int> choice(cells, 0);
  const long long total = static_cast<long long>(deterministic_count);
  for (long long n = 0; n < total; ++n) {
    std::fill(candidate.data().begin(), candidate.data().end(), 0.0);
    for (int c = 0; c < cells; ++c) {
      candidate(c / num_states, c % num_states, choice[c]) = 1.0;
    }
    best = std::max(best, cumulative_reward(model, mu, candidate));
    for (int c = 0; c < cells; ++c) {
      if (++choice[c] < num_actions) break;
      choice[c] = 0;
    }
  }

  for (const auto& point : grid) {
    for (int h = 0; h < horizon; ++h) {
      for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
          candidate(h, s, a) =
              static_cast<double>(point[a]) / grid_resolution;
        }
      }
    }
    best = std::max(best, cumulative_reward(model, mu, candidate));
  }
  return best - baseline;
}

}  // namespace mfgprox
