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

#ifndef MFGPROX_SVG_PLOT_H_
#define MFGPROX_SVG_PLOT_H_

#include <string>
#include <vector>

#include "mfgprox/experiment.h"
#include "mfgprox/solvers.h"

namespace mfgprox {

// Two-panel static SVG: exploitability against total inner steps on a log
// axis, and the action distribution of one (h, s) cell along the run. With
// three actions the distribution is drawn inside the probability triangle,
// otherwise as one line per action.
std::string render_experiment_svg(const ConvergenceTrace& trace,
                                  int inner_iters,
                                  const std::vector<ProbePoint>& probe_path,
                                  const std::string& title);

}  // namespace mfgprox

#endif  // MFGPROX_SVG_PLOT_H_
