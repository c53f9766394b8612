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

#include "mfgprox/types.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mfgprox {

ActionTable::ActionTable(int horizon, int num_states, int num_actions,
                         double fill)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon < 0 || num_states < 0 || num_actions < 0) {
    throw DimensionMismatch("ActionTable: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(horizon) * num_states * num_actions,
               fill);
}

Policy Policy::uniform(int horizon, int num_states, int num_actions) {
  if (num_actions <= 0) {
    throw DimensionMismatch("Policy::uniform: need at least one action");
  }
  return Policy(horizon, num_states, num_actions, 1.0 / num_actions);
}

double Policy::min_entry() const {
  if (data().empty()) return 0.0;
  return *std::min_element(data().begin(), data().end());
}

StateTable::StateTable(int horizon, int num_states, double fill)
    : horizon_(horizon), num_states_(num_states) {
  if (horizon < 0 || num_states < 0) {
    throw DimensionMismatch("StateTable: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(horizon) * num_states, fill);
}

double sum(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

bool is_distribution(std::span<const double> p, double tol) {
  if (p.empty()) return false;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
  }
  return std::abs(sum(p) - 1.0) <= tol;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double max_value = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(max_value)) return max_value;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - max_value);
  return max_value + std::log(acc);
}

void require_shape(bool condition, const std::string& what) {
  if (!condition) throw DimensionMismatch(what);
}

}  // namespace mfgprox
