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

#include <cstdint>
#include <string>
#include <vector>

#include "collabat/analysis.hpp"

namespace collabat {

/// {"entries": [{"model", "surrogate", "attack", "config": {...}, "correct",
///  "count", "accuracy"}]}
std::string report_to_json(const RobustnessReport& report);
/// Header: model,surrogate,attack,epsilon,step_size,iterations,random_start,
/// objective,correct,count,accuracy
std::string report_to_csv(const RobustnessReport& report);

/// Raw counts and metadata; `zero_diagonal` only records how the companion
/// CSV was rendered.
std::string confusion_to_json(const ConfusionMatrix& confusion, bool zero_diagonal);
std::string discrepancy_to_json(const DiscrepancyScore& score, const ConfusionMatrix& confusion);

struct RunManifest {
  std::string config_hash;
  std::string toolkit_version;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;
};

std::string manifest_to_json(const RunManifest& manifest);

/// Library version baked in at build time.
std::string toolkit_version();

}  // namespace collabat
