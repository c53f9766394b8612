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

#ifndef MFGPROX_MODEL_H_
#define MFGPROX_MODEL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mfgprox/types.h"

namespace mfgprox {

// Dense transition table P_h(s' | s, a), stored as [h][s][a][s'].
class TransitionKernel {
 public:
  TransitionKernel() = default;
  TransitionKernel(int horizon, int num_states, int num_actions);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& operator()(int h, int s, int a, int next) {
    return data_[index(h, s, a) + next];
  }
  double operator()(int h, int s, int a, int next) const {
    return data_[index(h, s, a) + next];
  }

  std::span<double> next(int h, int s, int a) {
    return {data_.data() + index(h, s, a),
            static_cast<std::size_t>(num_states_)};
  }
  std::span<const double> next(int h, int s, int a) const {
    return {data_.data() + index(h, s, a),
            static_cast<std::size_t>(num_states_)};
  }

  friend bool operator==(const TransitionKernel&,
                         const TransitionKernel&) = default;

 private:
  std::size_t index(int h, int s, int a) const {
    return ((static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ +
            a) *
           num_states_;
  }

  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> data_;
};

// Serializable reward families. A RewardModel built from an arbitrary
// callable carries no descriptor and cannot be written to JSON.
struct BeachBarReward {
  int num_states = 0;
  friend bool operator==(const BeachBarReward&,
                         const BeachBarReward&) = default;
};

// r_h(s, a, mu) = coefficients[h][s][a] - (crowd_penalty ? log mu(s) : 0).
struct TableReward {
  ActionTable coefficients;
  bool crowd_penalty = false;
  friend bool operator==(const TableReward&, const TableReward&) = default;
};

using RewardDescriptor = std::variant<BeachBarReward, TableReward>;

// r_h(s, a, mu_h). `mu_h` is the full state distribution at step h.
using RewardFn =
    std::function<double(int h, int s, int a, std::span<const double> mu_h)>;

class RewardModel {
 public:
  RewardModel(RewardFn evaluate, double lipschitz_hint, double mu_floor);

  static RewardModel beach_bar(int num_states, double mu_floor = 1e-9);
  static RewardModel table(ActionTable coefficients, bool crowd_penalty,
                           double mu_floor = 1e-9);
  static RewardModel zero();

  double operator()(int h, int s, int a, std::span<const double> mu_h) const {
    return evaluate_(h, s, a, mu_h);
  }

  // l1-Lipschitz constant of r in mu, as declared by the constructor.
  double lipschitz_hint() const { return lipschitz_hint_; }
  double mu_floor() const { return mu_floor_; }
  const std::optional<RewardDescriptor>& descriptor() const {
    return descriptor_;
  }

 private:
  RewardFn evaluate_;
  double lipschitz_hint_ = 0.0;
  double mu_floor_ = 1e-9;
  std::optional<RewardDescriptor> descriptor_;
};

// A finite-horizon mean-field game (S, A, H, P, r, mu_1). The constructor
// checks that the table shapes agree; semantic invariants (stochastic rows,
// reachability, H >= 2) are reported by validate_model.
class MfgModel {
 public:
  MfgModel(int num_states, int num_actions, int horizon,
           TransitionKernel transitions, RewardModel reward,
           std::vector<double> initial_distribution);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  const TransitionKernel& transitions() const { return transitions_; }
  const RewardModel& reward() const { return reward_; }
  const std::vector<double>& initial_distribution() const {
    return initial_distribution_;
  }

  bool matches(const ActionTable& table) const {
    return table.horizon() == horizon_ && table.num_states() == num_states_ &&
           table.num_actions() == num_actions_;
  }
  bool matches(const StateTable& table) const {
    return table.horizon() == horizon_ && table.num_states() == num_states_;
  }

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  TransitionKernel transitions_;
  RewardModel reward_;
  std::vector<double> initial_distribution_;
};

struct Violation {
  enum class Kind {
    kHorizonTooShort,
    kInitialDistribution,
    kNegativeProbability,
    kRowNotNormalized,
    kUnreachableState,
  };
  Kind kind;
  int h = -1;
  int s = -1;
  int a = -1;
  std::string message;
};

// Returns every violated model invariant; empty iff the model is valid.
std::vector<Violation> validate_model(const MfgModel& model);

// Beach bar benchmark: a noisy walk on the torus {0, ..., S-1} with actions
// {-1, 0, +1} (indices 0, 1, 2). The intended move s + a receives mass
// 1 - epsilon and each torus neighbour of it epsilon / 2. Reward:
//   r_h(s, a, mu) = -|a|/S - |s - S/2|/S - log(max(mu(s), mu_floor)),
// with S/2 rounded down. Initial distribution is uniform.
MfgModel beach_bar_model(int num_states, int horizon, double epsilon,
                         double mu_floor = 1e-9);

// Move (-1, 0 or +1) associated with beach bar action index a.
inline int beach_bar_move(int a) { return a - 1; }

// Samples `num_samples` pairs of (mu, pi) and (mu~, pi~) uniformly on the
// product of simplices and returns the largest value of
//   sum_{h,s,a} (r_h(s,a,mu_h) - r_h(s,a,mu~_h)) (pi_h(a|s) mu_h(s)
//                                                - pi~_h(a|s) mu~_h(s)).
// A result <= 0 (up to roundoff) means no monotonicity violation was seen.
double check_weak_monotonicity(const MfgModel& model, int num_samples,
                               std::uint64_t rng_seed);

}  // namespace mfgprox

#endif  // MFGPROX_MODEL_H_
