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

#ifndef MFGPROX_TYPES_H_
#define MFGPROX_TYPES_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfgprox {

// All time, state and action indices in this library are zero-based: step
// h = 0 is the first decision step and h = horizon - 1 the last one.

// Raised when table shapes of the arguments do not agree.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a policy or anchor lacks the support an operation needs
// (zero entries inside a log ratio, positive mass on a zero-anchor action).
class SupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an iterative procedure produces a non-finite state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense [h][s][a] table of reals.
class ActionTable {
 public:
  ActionTable() = default;
  ActionTable(int horizon, int num_states, int num_actions, double fill = 0.0);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& operator()(int h, int s, int a) { return data_[index(h, s, a)]; }
  double operator()(int h, int s, int a) const { return data_[index(h, s, a)]; }

  std::span<double> row(int h, int s) {
    return {data_.data() + index(h, s, 0),
            static_cast<std::size_t>(num_actions_)};
  }
  std::span<const double> row(int h, int s) const {
    return {data_.data() + index(h, s, 0),
            static_cast<std::size_t>(num_actions_)};
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const ActionTable& other) const {
    return horizon_ == other.horizon_ && num_states_ == other.num_states_ &&
           num_actions_ == other.num_actions_;
  }

  friend bool operator==(const ActionTable&, const ActionTable&) = default;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + a;
  }

  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> data_;
};

// Time-indexed, state-conditioned action distributions pi_h(. | s).
class Policy : public ActionTable {
 public:
  using ActionTable::ActionTable;

  static Policy uniform(int horizon, int num_states, int num_actions);

  // Smallest entry over all (h, s, a); positive iff the policy has full
  // support.
  double min_entry() const;
};

// Dense [h][s] table of reals.
class StateTable {
 public:
  StateTable() = default;
  StateTable(int horizon, int num_states, double fill = 0.0);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }

  double& operator()(int h, int s) { return data_[index(h, s)]; }
  double operator()(int h, int s) const { return data_[index(h, s)]; }

  std::span<double> row(int h) {
    return {data_.data() + index(h, 0),
            static_cast<std::size_t>(num_states_)};
  }
  std::span<const double> row(int h) const {
    return {data_.data() + index(h, 0),
            static_cast<std::size_t>(num_states_)};
  }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const StateTable&, const StateTable&) = default;

 private:
  std::size_t index(int h, int s) const {
    return static_cast<std::size_t>(h) * num_states_ + s;
  }

  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<double> data_;
};

// Population flow mu_h over states, one distribution per step.
class MeanFieldFlow : public StateTable {
 public:
  using StateTable::StateTable;
};

// Probability-vector helpers shared by the modules.
double sum(std::span<const double> values);
bool is_distribution(std::span<const double> p, double tol = 1e-12);
double log_sum_exp(std::span<const double> values);

// Throws DimensionMismatch with `what` when the condition is false.
void require_shape(bool condition, const std::string& what);

}  // namespace mfgprox

#endif  // MFGPROX_TYPES_H_
