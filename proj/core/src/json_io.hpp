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

#pragma once

// JSON conversions shared by the checkpoint, config and report writers.

#include <set>
#include <string>

#include <json.hpp>

#include "collabat/attacks.hpp"
#include "collabat/classifier.hpp"
#include "collabat/objectives.hpp"

namespace collabat::detail {

using Json = nlohmann::json;

/// Throws ConfigError-compatible std::invalid_argument naming `where` if
/// `object` holds a key outside `allowed`.
void reject_unknown_keys(const Json& object, const std::set<std::string>& allowed,
                         const std::string& where);

Json architecture_to_json(const Architecture& arch, bool include_classes);
/// `classes` is used when the object carries no "classes" key.
Architecture architecture_from_json(const Json& j, int classes, const std::string& where);

Json method_to_json(const MethodSpec& method);
MethodSpec method_from_json(const Json& j, const std::string& where);

Json attack_to_json(const AttackConfig& attack);
AttackConfig attack_from_json(const Json& j, const AttackConfig& defaults,
                              const std::string& where);

}  // namespace collabat::detail
