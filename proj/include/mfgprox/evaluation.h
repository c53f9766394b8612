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

#ifndef MFGPROX_EVALUATION_H_
#define MFGPROX_EVALUATION_H_

#include <vector>

#include "mfgprox/model.h"
#include "mfgprox/types.h"

namespace mfgprox {

struct BestResponseResult {
  Policy policy;  // one-hot rows
  double value = 0.0;
};

// Optimal deterministic policy of the MDP obtained by freezing the flow at
// `mu`; ties go to the lowest action index. `value` is
// E_{s ~ mu_1} V_0(s) = max_{pi'} J(mu, pi').
BestResponseResult best_response(const MfgModel& model,
                                 const MeanFieldFlow& mu);

// max_{pi'} J(m[pi], pi') - J(m[pi], pi).
double exploitability(const MfgModel& model, const Policy& policy);

// Smallest summed l1 row distance sum_{h,s} |pi_h(s) - ref_h(s)|_1 over the
// reference set. Throws std::invalid_argument for an empty set.
double distance_to_policy_set(const Policy& policy,
                              const std::vector<Policy>& reference_set);

// Largest improvement J(m[pi], pi') - J(m[pi], pi) over every deterministic
// pi' and over the stationary mixed policies whose rows all equal a point of
// the simplex grid with `grid_resolution` subdivisions. Throws
// std::invalid_argument when more than 10^6 candidates would be needed.
double brute_force_equilibrium_check(const MfgModel& model,
                                     const Policy& policy,
                                     int grid_resolution);

}  // namespace mfgprox

#endif  // MFGPROX_EVALUATION_H_
