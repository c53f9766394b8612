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

#include "mfgprox/model_io.h"

#include <fstream>
#include <string>

namespace mfgprox {

using nlohmann::json;

json model_to_json(const MfgModel& model) {
  const int horizon = model.horizon();
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  const auto& descriptor = model.reward().descriptor();
  if (!descriptor) {
    throw std::invalid_argument(
        "model_to_json: reward has no serializable description");
  }

  json transitions = json::array();
  for (int h = 0; h < horizon; ++h) {
    json per_state = json::array();
    for (int s = 0; s < num_states; ++s) {
      json per_action = json::array();
      for (int a = 0; a < num_actions; ++a) {
        const auto next = model.transitions().next(h, s, a);
        per_action.push_back(std::vector<double>(next.begin(), next.end()));
      }
      per_state.push_back(std::move(per_action));
    }
    transitions.push_back(std::move(per_state));
  }

  json reward;
  reward["mu_floor"] = model.reward().mu_floor();
  if (std::holds_alternative<BeachBarReward>(*descriptor)) {
    reward["kind"] = "beach_bar";
  } else {
    const auto& table = std::get<TableReward>(*descriptor);
    reward["kind"] = "table";
    reward["crowd_penalty"] = table.crowd_penalty;
    json coefficients = json::array();
    for (int h = 0; h < horizon; ++h) {
      json per_state = json::array();
      for (int s = 0; s < num_states; ++s) {
        const auto row = table.coefficients.row(h, s);
        per_state.push_back(std::vector<double>(row.begin(), row.end()));
      }
      coefficients.push_back(std::move(per_state));
    }
    reward["coefficients"] = std::move(coefficients);
  }

  return json{{"num_states", num_states},
              {"num_actions", num_actions},
              {"horizon", horizon},
              {"transitions", std::move(transitions)},
              {"initial_distribution", model.initial_distribution()},
              {"reward", std::move(reward)}};
}

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw std::invalid_argument(std::string("model JSON: missing field '") +
                                key + "'");
  }
  return doc.at(key);
}

const json& sized_array(const json& node, int size, const std::string& where) {
  if (!node.is_array() || static_cast<int>(node.size()) != size) {
    throw std::invalid_argument("model JSON: " + where + " must be an array of " +
                                std::to_string(size) + " entries");
  }
  return node;
}

double number(const json& node, const std::string& where) {
  if (!node.is_number()) {
    throw std::invalid_argument("model JSON: " + where + " must be a number");
  }
  return node.get<double>();
}

}  // namespace

namespace {

MfgModel parse_model(const json& doc) {
  const int num_states = field(doc, "num_states").get<int>();
  const int num_actions = field(doc, "num_actions").get<int>();
  const int horizon = field(doc, "horizon").get<int>();
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0) {
    throw std::invalid_argument("model JSON: dimensions must be positive");
  }

  TransitionKernel kernel(horizon, num_states, num_actions);
  const json& transitions =
      sized_array(field(doc, "transitions"), horizon, "transitions");
  for (int h = 0; h < horizon; ++h) {
    const json& per_state = sized_array(transitions[h], num_states,
                                        "transitions[" + std::to_string(h) + "]");
    for (int s = 0; s < num_states; ++s) {
      const json& per_action =
          sized_array(per_state[s], num_actions, "transitions[h][s]");
      for (int a = 0; a < num_actions; ++a) {
        const json& next =
            sized_array(per_action[a], num_states, "transitions[h][s][a]");
        for (int t = 0; t < num_states; ++t) {
          kernel(h, s, a, t) = number(next[t], "transition probability");
        }
      }
    }
  }

  const json& mu1_node = sized_array(field(doc, "initial_distribution"),
                                     num_states, "initial_distribution");
  std::vector<double> mu1(num_states);
  for (int s = 0; s < num_states; ++s) {
    mu1[s] = number(mu1_node[s], "initial_distribution entry");
  }

  const json& reward = field(doc, "reward");
  const std::string kind = field(reward, "kind").get<std::string>();
  const double mu_floor =
      reward.contains("mu_floor") ? number(reward["mu_floor"], "mu_floor") : 1e-9;
  if (kind == "beach_bar") {
    return MfgModel(num_states, num_actions, horizon, std::move(kernel),
                    RewardModel::beach_bar(num_states, mu_floor),
                    std::move(mu1));
  }
  if (kind == "table") {
    ActionTable coefficients(horizon, num_states, num_actions);
    const json& table =
        sized_array(field(reward, "coefficients"), horizon, "coefficients");
    for (int h = 0; h < horizon; ++h) {
      const json& per_state = sized_array(table[h], num_states, "coefficients[h]");
      for (int s = 0; s < num_states; ++s) {
        const json& per_action =
            sized_array(per_state[s], num_actions, "coefficients[h][s]");
        for (int a = 0; a < num_actions; ++a) {
          coefficients(h, s, a) = number(per_action[a], "reward coefficient");
        }
      }
    }
    const bool crowd = reward.value("crowd_penalty", false);
    return MfgModel(num_states, num_actions, horizon, std::move(kernel),
                    RewardModel::table(std::move(coefficients), crowd, mu_floor),
                    std::move(mu1));
  }
  throw std::invalid_argument("model JSON: unknown reward kind '" + kind + "'");
}

}  // namespace

MfgModel model_from_json(const json& doc) {
  try {
    return parse_model(doc);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

MfgModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open model file " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("model JSON parse error in " + path.string() +
                                ": " + e.what());
  }
  return model_from_json(doc);
}

void save_model(const std::filesystem::path& path, const MfgModel& model) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write model file " + path.string());
  }
  out << model_to_json(model).dump(2) << '\n';
}

}  // namespace mfgprox
