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

#include <string>
#include <string_view>
#include <vector>

#include "collabat/objectives.hpp"

namespace collabat {

struct ParticipantTemplate {
  std::string name;
  MethodSpec method;
};

struct Configuration {
  std::string name;
  std::vector<ParticipantTemplate> participants;
  CollabConfig collab;
};

/// Named collaborative setups, all with alpha = 0.05:
///   CAT_A-T    AT + TRADES
///   CAT_A-A    AT + ALP
///   CAT_T-A    TRADES + ALP
///   CAT_T-T    TRADES + TRADES
///   CAT_A-A-T  AT + ALP + TRADES
///   CAT_P-C    one AT-style model attacked with PGD-CE and PGD-CW, the two
///              predictions guiding each other (dual-attack mode)
/// Throws std::invalid_argument for any other name.
Configuration make_configuration(std::string_view name);

std::vector<std::string> configuration_names();

}  // namespace collabat
