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

#include "collabat/configurations.hpp"

#include <stdexcept>

namespace collabat {

std::vector<std::string> configuration_names() {
  return {"CAT_A-T", "CAT_A-A", "CAT_T-A", "CAT_T-T", "CAT_A-A-T", "CAT_P-C"};
}

Configuration make_configuration(std::string_view name) {
  Configuration c;
  c.name = std::string(name);
  c.collab.alpha = kDefaultAlpha;
  if (name == "CAT_A-T") {
    c.participants = {{"f", MethodSpec::at()}, {"g", MethodSpec::trades()}};
  } else if (name == "CAT_A-A") {
    c.participants = {{"f", MethodSpec::at()}, {"g", MethodSpec::alp()}};
  } else if (name == "CAT_T-A") {
    c.participants = {{"f", MethodSpec::trades()}, {"g", MethodSpec::alp()}};
  } else if (name == "CAT_T-T") {
    c.participants = {{"f", MethodSpec::trades()}, {"g", MethodSpec::trades()}};
  } else if (name == "CAT_A-A-T") {
    c.participants = {{"f", MethodSpec::at()}, {"g", MethodSpec::alp()}, {"h", MethodSpec::trades()}};
  } else if (name == "CAT_P-C") {
    c.participants = {{"f", MethodSpec::at()}};
    c.collab.mode = CollabMode::kDualAttack;
  } else {
    throw std::invalid_argument("unknown configuration '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace collabat
