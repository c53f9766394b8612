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

#ifndef MFGPROX_VALUE_FUNCTIONS_H_
#define MFGPROX_VALUE_FUNCTIONS_H_

#include "mfgprox/model.h"
#include "mfgprox/types.h"

namespace mfgprox {

// Regularized values of a policy against a fixed flow. `v` has horizon + 1
// rows; the last row is the terminal value and is identically zero.
struct QTable {
  ActionTable q;
  StateTable v;

  double Q(int h, int s, int a) const { return q(h, s, a); }
  double V(int h, int s) const { return v(h, s); }
};

// Backward induction, h = H-1 down to 0:
//   Q_h(s, a) = r_h(s, a, mu_h) + sum_s' P_h(s'|s,a) V_{h+1}(s'),
//   V_h(s)    = <Q_h(s, .), pi_h(s)> - lambda KL(pi_h(s) || anchor_h(s)).
// Note the KL term of step h enters V_h but not Q_h. Throws SupportError
// when lambda > 0 and the policy puts mass where the anchor has none.
QTable backward_values(const MfgModel& model, const MeanFieldFlow& mu,
                       const Policy& policy, const Policy& anchor,
                       double lambda);

// |J^{lambda,anchor}(m[pi], pi) - E_{s ~ mu_1} V_0(s)| with mu = m[pi].
double consistency_check_j_equals_v(const MfgModel& model,
                                    const Policy& policy, const Policy& anchor,
                                    double lambda);

// G_h(s, a) = Q_h(s, a) - lambda log(pi_h(a|s) / anchor_h(a|s)). Both
// policies need full support.
ActionTable advantage_quantity(const QTable& values, const Policy& policy,
                               const Policy& anchor, double lambda);

}  // namespace mfgprox

#endif  // MFGPROX_VALUE_FUNCTIONS_H_
