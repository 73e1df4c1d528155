// Copyright 2026 The MATRL Authors
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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "matrl/game_model.hpp"

namespace matrl {
namespace {

using nlohmann::json;

const json& Require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(where + key, "missing field");
  return *it;
}

double AsReal(const json& v, const std::string& field) {
  if (!v.is_number()) throw LoadError(field, "expected a number");
  return v.get<double>();
}

int ResolveState(const json& v, const std::vector<std::string>& names,
                 const std::string& field) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    for (size_t s = 0; s < names.size(); ++s) {
      if (names[s] == name) return static_cast<int>(s);
    }
    throw LoadError(field, "unknown state '" + name + "'");
  }
  if (v.is_number_integer()) {
    const int s = v.get<int>();
    if (s < 0 || s >= static_cast<int>(names.size())) {
      throw LoadError(field, "state index out of range");
    }
    return s;
  }
  throw LoadError(field, "expected a state name or index");
}

int ResolveJoint(const json& v,
                 const std::vector<std::vector<std::string>>& actions,
                 const std::string& field) {
  if (!v.is_array() || v.size() != actions.size()) {
    throw LoadError(field, "expected one action per agent");
  }
  int joint = 0;
  for (size_t i = 0; i < actions.size(); ++i) {
    const int n = static_cast<int>(actions[i].size());
    int a = -1;
    if (v[i].is_string()) {
      const auto name = v[i].get<std::string>();
      for (int k = 0; k < n; ++k) {
        if (actions[i][k] == name) a = k;
      }
      if (a < 0) {
        throw LoadError(field, "unknown action '" + name + "' for agent " +
                                   std::to_string(i));
      }
    } else if (v[i].is_number_integer()) {
      a = v[i].get<int>();
      if (a < 0 || a >= n) throw LoadError(field, "action index out of range");
    } else {
      throw LoadError(field, "expected an action name or index");
    }
    joint = joint * n + a;
  }
  return joint;
}

}  // namespace

StochasticGame LoadStochasticGame(std::string_view descriptor) {
  json doc;
  try {
    doc = json::parse(descriptor);
  } catch (const json::parse_error& e) {
    throw LoadError("document", e.what());
  }
  if (!doc.is_object()) throw LoadError("document", "expected an object");

  StochasticGame::Spec spec;
  const json& states = Require(doc, "states", "");
  if (!states.is_array()) throw LoadError("states", "expected a list of names");
  for (const auto& s : states) {
    if (!s.is_string()) throw LoadError("states", "state names must be strings");
    spec.state_names.push_back(s.get<std::string>());
  }
  const json& actions = Require(doc, "actions", "");
  if (!actions.is_array()) throw LoadError("actions", "expected a list of lists");
  for (size_t i = 0; i < actions.size(); ++i) {
    const std::string field = "actions[" + std::to_string(i) + "]";
    if (!actions[i].is_array()) throw LoadError(field, "expected a list of names");
    std::vector<std::string> names;
    for (const auto& a : actions[i]) {
      if (!a.is_string()) throw LoadError(field, "action names must be strings");
      names.push_back(a.get<std::string>());
    }
    spec.action_names.push_back(std::move(names));
  }
  const json& agents = Require(doc, "agents", "");
  if (!agents.is_number_integer() ||
      agents.get<long long>() != static_cast<long long>(spec.action_names.size())) {
    throw LoadError("agents", "must equal the number of action lists");
  }
  spec.gamma = AsReal(Require(doc, "gamma", ""), "gamma");
  const json& p0 = Require(doc, "p0", "");
  if (!p0.is_array()) throw LoadError("p0", "expected a list of reals");
  for (const auto& v : p0) spec.p0.push_back(AsReal(v, "p0"));

  const int S = static_cast<int>(spec.state_names.size());
  int J = 1;
  for (const auto& a : spec.action_names) J *= std::max<int>(1, a.size());
  const int N = static_cast<int>(spec.action_names.size());

  std::vector<std::vector<bool>> seen(S, std::vector<bool>(J, false));
  spec.transition.assign(S, std::vector<std::vector<double>>(J));
  const json& transitions = Require(doc, "transitions", "");
  if (!transitions.is_array()) throw LoadError("transitions", "expected a list");
  for (size_t r = 0; r < transitions.size(); ++r) {
    const std::string where = "transitions[" + std::to_string(r) + "].";
    const json& rec = transitions[r];
    if (!rec.is_object()) throw LoadError(where, "expected a record");
    const int s = ResolveState(Require(rec, "state", where), spec.state_names,
                               where + "state");
    const int j = ResolveJoint(Require(rec, "joint_action", where),
                               spec.action_names, where + "joint_action");
    if (seen[s][j]) throw LoadError(where, "duplicate transition record");
    seen[s][j] = true;
    const json& probs = Require(rec, "next_state_probs", where);
    std::vector<double> row(S, 0.0);
    if (probs.is_array()) {
      if (static_cast<int>(probs.size()) != S) {
        throw LoadError(where + "next_state_probs",
                        "expected " + std::to_string(S) + " entries");
      }
      for (int k = 0; k < S; ++k) {
        row[k] = AsReal(probs[k], where + "next_state_probs");
      }
    } else if (probs.is_object()) {
      for (const auto& [name, v] : probs.items()) {
        const int k = ResolveState(json(name), spec.state_names,
                                   where + "next_state_probs");
        row[k] = AsReal(v, where + "next_state_probs." + name);
      }
    } else {
      throw LoadError(where + "next_state_probs", "expected a list or object");
    }
    double sum = 0.0;
    for (double v : row) sum += v;
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row sums to " << sum << ", expected 1";
      throw LoadError(where + "next_state_probs", msg.str());
    }
    spec.transition[s][j] = std::move(row);
  }
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < J; ++j) {
      if (!seen[s][j]) {
        throw LoadError("transitions", "no record for state '" +
                                           spec.state_names[s] +
                                           "' joint action " + std::to_string(j));
      }
    }
  }

  spec.reward.assign(N, std::vector<std::vector<double>>(S, std::vector<double>(J, 0.0)));
  if (auto it = doc.find("rewards"); it != doc.end()) {
    if (!it->is_array()) throw LoadError("rewards", "expected a list");
    for (size_t r = 0; r < it->size(); ++r) {
      const std::string where = "rewards[" + std::to_string(r) + "].";
      const json& rec = (*it)[r];
      if (!rec.is_object()) throw LoadError(where, "expected a record");
      const json& agent = Require(rec, "agent", where);
      if (!agent.is_number_integer() || agent.get<int>() < 0 ||
          agent.get<int>() >= N) {
        throw LoadError(where + "agent", "agent index out of range");
      }
      const int s = ResolveState(Require(rec, "state", where), spec.state_names,
                                 where + "state");
      const int j = ResolveJoint(Require(rec, "joint_action", where),
                                 spec.action_names, where + "joint_action");
      spec.reward[agent.get<int>()][s][j] =
          AsReal(Require(rec, "value", where), where + "value");
    }
  }
  return StochasticGame(std::move(spec));
}

StochasticGame LoadStochasticGameFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("path", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return LoadStochasticGame(buf.str());
}

StochasticGame LoadStochasticGameByName(std::string_view name_or_path) {
  if (name_or_path == "builtin:coin_gathering") {
    return LoadStochasticGame(CoinGatheringDescriptor());
  }
  if (name_or_path == "builtin:prisoners_dilemma") {
    return LoadStochasticGame(PrisonersDilemmaDescriptor());
  }
  return LoadStochasticGameFile(std::filesystem::path(name_or_path));
}

}  // namespace matrl
