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

#include "mfgprox/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

namespace mfgprox {

TransitionKernel::TransitionKernel(int horizon, int num_states,
                                   int num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon < 0 || num_states < 0 || num_actions < 0) {
    throw DimensionMismatch("TransitionKernel: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(horizon) * num_states * num_actions *
                   num_states,
               0.0);
}

RewardModel::RewardModel(RewardFn evaluate, double lipschitz_hint,
                         double mu_floor)
    : evaluate_(std::move(evaluate)),
      lipschitz_hint_(lipschitz_hint),
      mu_floor_(mu_floor) {
  if (!evaluate_) throw std::invalid_argument("RewardModel: empty callable");
  if (!(lipschitz_hint >= 0.0)) {
    throw std::invalid_argument("RewardModel: lipschitz_hint must be >= 0");
  }
  if (!(mu_floor > 0.0)) {
    throw std::invalid_argument("RewardModel: mu_floor must be positive");
  }
}

RewardModel RewardModel::beach_bar(int num_states, double mu_floor) {
  if (num_states < 2) {
    throw std::invalid_argument("beach bar reward needs at least two states");
  }
  const double size = num_states;
  const int bar = num_states / 2;
  auto fn = [size, bar, mu_floor](int /*h*/, int s, int a,
                                  std::span<const double> mu) {
    const double move_cost = std::abs(beach_bar_move(a)) / size;
    const double distance = std::abs(s - bar) / size;
    return -move_cost - distance - std::log(std::max(mu[s], mu_floor));
  };
  // |log x - log y| <= |x - y| / mu_floor on [mu_floor, 1].
  RewardModel model(std::move(fn), 1.0 / mu_floor, mu_floor);
  model.descriptor_ = BeachBarReward{num_states};
  return model;
}

RewardModel RewardModel::table(ActionTable coefficients, bool crowd_penalty,
                               double mu_floor) {
  auto shared = std::make_shared<const ActionTable>(coefficients);
  RewardFn fn;
  if (crowd_penalty) {
    fn = [shared, mu_floor](int h, int s, int a, std::span<const double> mu) {
      return (*shared)(h, s, a) - std::log(std::max(mu[s], mu_floor));
    };
  } else {
    fn = [shared](int h, int s, int a, std::span<const double>) {
      return (*shared)(h, s, a);
    };
  }
  RewardModel model(std::move(fn), crowd_penalty ? 1.0 / mu_floor : 0.0,
                    mu_floor);
  model.descriptor_ = TableReward{std::move(coefficients), crowd_penalty};
  return model;
}

RewardModel RewardModel::zero() {
  return RewardModel([](int, int, int, std::span<const double>) { return 0.0; },
                     0.0, 1e-9);
}

MfgModel::MfgModel(int num_states, int num_actions, int horizon,
                   TransitionKernel transitions, RewardModel reward,
                   std::vector<double> initial_distribution)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      transitions_(std::move(transitions)),
      reward_(std::move(reward)),
      initial_distribution_(std::move(initial_distribution)) {
  require_shape(num_states > 0 && num_actions > 0 && horizon > 0,
                "MfgModel: dimensions must be positive");
  require_shape(transitions_.horizon() == horizon &&
                    transitions_.num_states() == num_states &&
                    transitions_.num_actions() == num_actions,
                "MfgModel: transition kernel shape does not match model");
  require_shape(static_cast<int>(initial_distribution_.size()) == num_states,
                "MfgModel: initial distribution has wrong length");
  if (const auto& d = reward_.descriptor()) {
    if (const auto* table = std::get_if<TableReward>(&*d)) {
      require_shape(table->coefficients.horizon() == horizon &&
                        table->coefficients.num_states() == num_states &&
                        table->coefficients.num_actions() == num_actions,
                    "MfgModel: reward table shape does not match model");
    } else if (const auto* bar = std::get_if<BeachBarReward>(&*d)) {
      require_shape(bar->num_states == num_states && num_actions == 3,
                    "MfgModel: beach bar reward needs |S| states, 3 actions");
    }
  }
}

namespace {

constexpr double kSumTolerance = 1e-12;

std::string describe(const char* what, int h, int s, int a) {
  std::ostringstream out;
  out << what << " at (h=" << h << ", s=" << s;
  if (a >= 0) out << ", a=" << a;
  out << ")";
  return out.str();
}

}  // namespace

std::vector<Violation> validate_model(const MfgModel& model) {
  std::vector<Violation> violations;
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();

  if (horizon < 2) {
    violations.push_back({Violation::Kind::kHorizonTooShort, -1, -1, -1,
                          "horizon must be at least 2"});
  }

  const auto& mu1 = model.initial_distribution();
  if (!is_distribution(mu1, kSumTolerance)) {
    violations.push_back({Violation::Kind::kInitialDistribution, -1, -1, -1,
                          "initial distribution is not a probability vector"});
  }

  const auto& kernel = model.transitions();
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        const auto next = kernel.next(h, s, a);
        const bool negative = std::any_of(next.begin(), next.end(), [](double p) {
          return !(p >= 0.0) || !std::isfinite(p);
        });
        if (negative) {
          violations.push_back(
              {Violation::Kind::kNegativeProbability, h, s, a,
               describe("negative or non-finite transition probability", h,
                        s, a)});
        }
        if (std::abs(sum(next) - 1.0) > kSumTolerance) {
          violations.push_back(
              {Violation::Kind::kRowNotNormalized, h, s, a,
               describe("transition row does not sum to 1", h, s, a)});
        }
      }
    }
    for (int target = 0; target < num_states; ++target) {
      bool reachable = false;
      for (int s = 0; s < num_states && !reachable; ++s) {
        for (int a = 0; a < num_actions && !reachable; ++a) {
          reachable = kernel(h, s, a, target) > 0.0;
        }
      }
      if (!reachable) {
        violations.push_back({Violation::Kind::kUnreachableState, h, target,
                              -1,
                              describe("state is unreachable", h, target, -1)});
      }
    }
  }
  return violations;
}

MfgModel beach_bar_model(int num_states, int horizon, double epsilon,
                         double mu_floor) {
  if (num_states < 2) {
    throw std::invalid_argument("beach_bar_model: need at least two states");
  }
  if (horizon < 1) {
    throw std::invalid_argument("beach_bar_model: horizon must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("beach_bar_model: epsilon must lie in (0, 1)");
  }
  constexpr int kNumActions = 3;
  TransitionKernel kernel(horizon, num_states, kNumActions);
  auto wrap = [num_states](int x) {
    return ((x % num_states) + num_states) % num_states;
  };
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < kNumActions; ++a) {
        const int target = wrap(s + beach_bar_move(a));
        kernel(h, s, a, target) += 1.0 - epsilon;
        kernel(h, s, a, wrap(target - 1)) += epsilon / 2.0;
        kernel(h, s, a, wrap(target + 1)) += epsilon / 2.0;
      }
    }
  }
  std::vector<double> mu1(num_states, 1.0 / num_states);
  return MfgModel(num_states, kNumActions, horizon, std::move(kernel),
                  RewardModel::beach_bar(num_states, mu_floor),
                  std::move(mu1));
}

namespace {

void sample_simplex(std::mt19937_64& rng, std::span<double> out) {
  std::exponential_distribution<double> exp1(1.0);
  double total = 0.0;
  for (double& x : out) {
    x = exp1(rng);
    total += x;
  }
  for (double& x : out) x /= total;
}

}  // namespace

double check_weak_monotonicity(const MfgModel& model, int num_samples,
                               std::uint64_t rng_seed) {
  if (num_samples < 1) {
    throw std::invalid_argument("check_weak_monotonicity: num_samples >= 1");
  }
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const auto& reward = model.reward();

  std::mt19937_64 rng(rng_seed);
  StateTable mu(horizon, num_states);
  StateTable mu_tilde(horizon, num_states);
  Policy pi(horizon, num_states, num_actions);
  Policy pi_tilde(horizon, num_states, num_actions);

  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < num_samples; ++n) {
    for (int h = 0; h < horizon; ++h) {
      sample_simplex(rng, mu.row(h));
      sample_simplex(rng, mu_tilde.row(h));
      for (int s = 0; s < num_states; ++s) {
        sample_simplex(rng, pi.row(h, s));
        sample_simplex(rng, pi_tilde.row(h, s));
      }
    }
    double total = 0.0;
    for (int h = 0; h < horizon; ++h) {
      for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
          const double dr =
              reward(h, s, a, mu.row(h)) - reward(h, s, a, mu_tilde.row(h));
          const double dm =
              pi(h, s, a) * mu(h, s) - pi_tilde(h, s, a) * mu_tilde(h, s);
          total += dr * dm;
        }
      }
    }
    worst = std::max(worst, total);
  }
  return worst;
}

}  // namespace mfgprox
