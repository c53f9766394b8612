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

#ifndef MFGPROX_MODEL_IO_H_
#define MFGPROX_MODEL_IO_H_

#include <filesystem>

#include "json.hpp"
#include "mfgprox/model.h"

namespace mfgprox {

// JSON layout:
//   {
//     "num_states": S, "num_actions": A, "horizon": H,
//     "transitions": [H][S][A][S],
//     "initial_distribution": [S],
//     "reward": {"kind": "beach_bar", "mu_floor": 1e-9}
//            | {"kind": "table", "coefficients": [H][S][A],
//               "crowd_penalty": false, "mu_floor": 1e-9}
//   }
// Throws std::invalid_argument on malformed input, including models whose
// reward was built from an arbitrary callable.
nlohmann::json model_to_json(const MfgModel& model);
MfgModel model_from_json(const nlohmann::json& doc);

MfgModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const MfgModel& model);

}  // namespace mfgprox

#endif  // MFGPROX_MODEL_IO_H_
