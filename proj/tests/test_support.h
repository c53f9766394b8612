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

// Random instance generators and independent reference computations used by
// the unit and acceptance suites. Nothing here calls into the solver paths
// it is used to check.

#ifndef MFGPROX_TESTS_TEST_SUPPORT_H_
#define MFGPROX_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "mfgprox/model.h"
#include "mfgprox/types.h"

namespace mfgprox::testing {

inline void random_simplex(std::mt19937_64& rng, std::span<double> out,
                           double min_mass = 0.0) {
  std::exponential_distribution<double> exp1(1.0);
  double total = 0.0;
  for (double& x : out) {
    x = exp1(rng) + min_mass;
    total += x;
  }
  for (double& x : out) x /= total;
}

inline Policy random_policy(std::mt19937_64& rng, int horizon, int num_states,
                            int num_actions, double min_mass = 0.01) {
  Policy pi(horizon, num_states, num_actions);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) random_simplex(rng, pi.row(h, s), min_mass);
  }
  return pi;
}

inline TransitionKernel random_kernel(std::mt19937_64& rng, int horizon,
                                      int num_states, int num_actions) {
  TransitionKernel kernel(horizon, num_states, num_actions);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        random_simplex(rng, kernel.next(h, s, a), 0.05);
      }
    }
  }
  return kernel;
}

inline ActionTable random_table(std::mt19937_64& rng, int horizon,
                                int num_states, int num_actions, double lo,
                                double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  ActionTable t(horizon, num_states, num_actions);
  for (double& x : t.data()) x = unif(rng);
  return t;
}

enum class RewardKind {
  kTable,        // mu-independent, in [0, 1]
  kCrowdTable,   // table minus log mu(s)
  kLinearCrowd,  // table minus mu(s), stays inside [-1, 1]
};

inline MfgModel random_model(std::mt19937_64& rng, int num_states,
                             int num_actions, int horizon, RewardKind kind) {
  TransitionKernel kernel = random_kernel(rng, horizon, num_states, num_actions);
  std::vector<double> mu1(num_states);
  random_simplex(rng, mu1, 0.05);
  ActionTable coefficients =
      random_table(rng, horizon, num_states, num_actions, 0.0, 1.0);
  switch (kind) {
    case RewardKind::kTable:
      return MfgModel(num_states, num_actions, horizon, std::move(kernel),
                      RewardModel::table(std::move(coefficients), false), mu1);
    case RewardKind::kCrowdTable:
      return MfgModel(num_states, num_actions, horizon, std::move(kernel),
                      RewardModel::table(std::move(coefficients), true), mu1);
    case RewardKind::kLinearCrowd: {
      auto fn = [coefficients](int h, int s, int a, std::span<const double> mu) {
        return coefficients(h, s, a) - mu[s];
      };
      return MfgModel(num_states, num_actions, horizon, std::move(kernel),
                      RewardModel(fn, 1.0, 1e-9), mu1);
    }
  }
  throw std::logic_error("unreachable");
}

inline MfgModel with_reward(const MfgModel& model, RewardModel reward) {
  return MfgModel(model.num_states(), model.num_actions(), model.horizon(),
                  model.transitions(), std::move(reward),
                  model.initial_distribution());
}

// ---------------------------------------------------------------------------
// Oracles.

// State distribution under `policy` computed by pushing a one-hot
// distribution per start state separately and mixing afterwards.
inline std::vector<std::vector<double>> flow_by_superposition(
    const MfgModel& model, const Policy& policy) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int H = model.horizon();
  std::vector<std::vector<double>> flow(H, std::vector<double>(S, 0.0));
  for (int start = 0; start < S; ++start) {
    std::vector<double> d(S, 0.0);
    d[start] = 1.0;
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        flow[h][s] += model.initial_distribution()[start] * d[s];
      }
      if (h + 1 == H) break;
      std::vector<double> next(S, 0.0);
      for (int t = 0; t < S; ++t) {
        for (int s = 0; s < S; ++s) {
          for (int a = 0; a < A; ++a) {
            next[t] += d[s] * policy(h, s, a) * model.transitions()(h, s, a, t);
          }
        }
      }
      d = next;
    }
  }
  return flow;
}

inline double plain_kl(std::span<const double> p, std::span<const double> q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) total += p[i] * std::log(p[i] / q[i]);
  }
  return total;
}

// Expected value of sum_h (r_h(s_h, a_h, mu_h) - lambda KL(pi_h(s_h), anchor_h(s_h)))
// from start state `s0`, by enumerating every state/action path.
inline double enumerate_paths(const MfgModel& model,
                              const std::vector<std::vector<double>>& mu,
                              const Policy& policy, const Policy& anchor,
                              double lambda, int h, int s) {
  if (h == model.horizon()) return 0.0;
  const double kl = lambda > 0.0 ? plain_kl(policy.row(h, s), anchor.row(h, s)) : 0.0;
  double total = -lambda * kl;
  for (int a = 0; a < model.num_actions(); ++a) {
    const double pa = policy(h, s, a);
    double branch = model.reward()(h, s, a, mu[h]);
    for (int t = 0; t < model.num_states(); ++t) {
      const double pt = model.transitions()(h, s, a, t);
      if (pt == 0.0) continue;
      branch += pt * enumerate_paths(model, mu, policy, anchor, lambda, h + 1, t);
    }
    total += pa * branch;
  }
  return total;
}

// Finite-horizon policy evaluation written with per-step transition
// matrices P_pi and reward vectors r_pi: V_h = r_pi + P_pi V_{h+1}.
inline std::vector<std::vector<double>> matrix_policy_evaluation(
    const MfgModel& model, const std::vector<std::vector<double>>& mu,
    const Policy& policy) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int H = model.horizon();
  std::vector<std::vector<double>> values(H + 1, std::vector<double>(S, 0.0));
  for (int h = H - 1; h >= 0; --h) {
    std::vector<std::vector<double>> p_pi(S, std::vector<double>(S, 0.0));
    std::vector<double> r_pi(S, 0.0);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        r_pi[s] += policy(h, s, a) * model.reward()(h, s, a, mu[h]);
        for (int t = 0; t < S; ++t) {
          p_pi[s][t] += policy(h, s, a) * model.transitions()(h, s, a, t);
        }
      }
    }
    for (int s = 0; s < S; ++s) {
      double v = r_pi[s];
      for (int t = 0; t < S; ++t) v += p_pi[s][t] * values[h + 1][t];
      values[h][s] = v;
    }
  }
  return values;
}

// Optimal value of the frozen-flow MDP by top-down memoized recursion.
class MemoizedOptimalValue {
 public:
  MemoizedOptimalValue(const MfgModel& model,
                       std::vector<std::vector<double>> mu)
      : model_(model), mu_(std::move(mu)) {}

  double value(int h, int s) {
    if (h == model_.horizon()) return 0.0;
    const auto key = std::make_pair(h, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < model_.num_actions(); ++a) {
      double q = model_.reward()(h, s, a, mu_[h]);
      for (int t = 0; t < model_.num_states(); ++t) {
        q += model_.transitions()(h, s, a, t) * value(h + 1, t);
      }
      best = std::max(best, q);
    }
    memo_[key] = best;
    return best;
  }

  double start_value() {
    double total = 0.0;
    for (int s = 0; s < model_.num_states(); ++s) {
      total += model_.initial_distribution()[s] * value(0, s);
    }
    return total;
  }

 private:
  const MfgModel& model_;
  std::vector<std::vector<double>> mu_;
  std::map<std::pair<int, int>, double> memo_;
};

inline std::vector<std::vector<double>> to_rows(const StateTable& t) {
  std::vector<std::vector<double>> rows(t.horizon());
  for (int h = 0; h < t.horizon(); ++h) {
    rows[h].assign(t.row(h).begin(), t.row(h).end());
  }
  return rows;
}

}  // namespace mfgprox::testing

#endif  // MFGPROX_TESTS_TEST_SUPPORT_H_
