// ----------------------------------------------------------------------------
// Copyright 2026 The collabat Authors
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
// ----------------------------------------------------------------------------

#include "json_io.hpp"

#include "collabat/config.hpp"

namespace collabat::detail {
namespace {

template <typename T>
T get_as(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key, "missing or has the wrong type");
  }
}

}  // namespace

void reject_unknown_keys(const Json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!object.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError(where.empty() ? item.key() : where + "." + item.key(),
                        "unknown field");
    }
  }
}

Json architecture_to_json(const Architecture& arch, bool include_classes) {
  Json j;
  j["kind"] = to_string(arch.kind);
  if (arch.kind == Architecture::Kind::kMlp) {
    j["input_dim"] = arch.input.size();
    j["hidden"] = arch.widths;
  } else {
    j["input"] = {arch.input.channels, arch.input.height, arch.input.width};
    j["channels"] = arch.widths;
  }
  if (include_classes) j["classes"] = arch.classes;
  return j;
}

Architecture architecture_from_json(const Json& j, int classes, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  const auto kind = get_as<std::string>(j, "kind", where);
  if (j.contains("classes")) classes = get_as<int>(j, "classes", where);
  Architecture arch;
  if (kind == "mlp") {
    reject_unknown_keys(j, {"kind", "input_dim", "hidden", "classes"}, where);
    arch = Architecture::mlp(get_as<int>(j, "input_dim", where),
                             j.contains("hidden") ? get_as<std::vector<int>>(j, "hidden", where)
                                                  : std::vector<int>{},
                             classes);
  } else if (kind == "conv") {
    reject_unknown_keys(j, {"kind", "input", "channels", "classes"}, where);
    const auto input = get_as<std::vector<int>>(j, "input", where);
    if (input.size() != 3) throw ConfigError(where + ".input", "expected [channels, height, width]");
    arch = Architecture::conv({input[0], input[1], input[2]},
                              get_as<std::vector<int>>(j, "channels", where), classes);
  } else {
    throw ConfigError(where + ".kind", "expected \"mlp\" or \"conv\", got \"" + kind + "\"");
  }
  try {
    arch.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
  return arch;
}

Json method_to_json(const MethodSpec& method) {
  return Json{{"kind", to_string(method.kind)}, {"lambda", method.lambda}};
}

MethodSpec method_from_json(const Json& j, const std::string& where) {
  reject_unknown_keys(j, {"kind", "lambda"}, where);
  MethodSpec method;
  try {
    method.kind = parse_method(get_as<std::string>(j, "kind", where));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ".kind", e.what());
  }
  switch (method.kind) {
    case MethodKind::kAt: method.lambda = 0.0; break;
    case MethodKind::kTrades: method.lambda = kDefaultTradesLambda; break;
    case MethodKind::kAlp: method.lambda = kDefaultAlpLambda; break;
  }
  if (j.contains("lambda")) method.lambda = get_as<double>(j, "lambda", where);
  try {
    method.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ".lambda", e.what());
  }
  return method;
}

Json attack_to_json(const AttackConfig& attack) {
  return Json{{"epsilon", attack.epsilon},
              {"step_size", attack.step_size},
              {"iterations", attack.iterations},
              {"random_start", attack.random_start},
              {"objective", to_string(attack.objective)}};
}

AttackConfig attack_from_json(const Json& j, const AttackConfig& defaults,
                              const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  AttackConfig attack = defaults;
  if (j.contains("epsilon")) attack.epsilon = get_as<double>(j, "epsilon", where);
  if (j.contains("step_size")) attack.step_size = get_as<double>(j, "step_size", where);
  if (j.contains("iterations")) attack.iterations = get_as<int>(j, "iterations", where);
  if (j.contains("random_start")) attack.random_start = get_as<bool>(j, "random_start", where);
  if (j.contains("objective")) {
    try {
      attack.objective = parse_objective(get_as<std::string>(j, "objective", where));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ".objective", e.what());
    }
  }
  if (attack.is_clean()) {
    attack = AttackConfig::clean();
  }
  try {
    attack.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
  return attack;
}

}  // namespace collabat::detail
