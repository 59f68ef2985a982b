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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "collabat/attacks.hpp"
#include "collabat/classifier.hpp"
#include "collabat/datasets.hpp"
#include "collabat/objectives.hpp"
#include "collabat/training.hpp"

namespace collabat {

/// Parse or validation failure, tagged with the dotted path of the field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ParticipantConfig {
  std::string name;
  Architecture architecture;
  MethodSpec method;
};

struct NamedAttack {
  std::string name;
  AttackConfig attack;
};

/// FGSM, PGD-20, CW-inf (PGD-20 on the margin), all at 8/255 with 2/255 steps,
/// plus the clean baseline.
std::vector<NamedAttack> default_eval_attacks();

/// One experiment, read from a JSON file:
///
///   {
///     "dataset":      {"name", "size", "noise", "seed", "classes", "dim",
///                      "image_size", "path"},
///     "participants": [{"name", "architecture": {...}, "method": {"kind", "lambda"}}],
///     "collab":       {"alpha", "mode"},
///     "train":        {"epochs", "batch_size", "base_lr", "lr_drops": [[epoch, divisor]],
///                      "momentum", "weight_decay", "seed", "inner_attack": {...}},
///     "eval":         [{"name", "epsilon", "step_size", "iterations",
///                       "random_start", "objective"}],
///     "output":       {"dir"}
///   }
///
/// Every section except "participants" may be omitted. Unknown keys anywhere
/// are rejected.
struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<ParticipantConfig> participants;
  CollabConfig collab;
  TrainConfig train;
  std::vector<NamedAttack> eval = default_eval_attacks();
  std::string output_dir = "runs/default";
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully-expanded JSON with sorted keys; parse_config(canonical_text(c))
/// reproduces c.
std::string canonical_text(const ExperimentConfig& config);

/// SHA-256 (hex) of the canonical text with the output section removed, so
/// that only fields that change results change the hash.
std::string config_hash(const ExperimentConfig& config);

}  // namespace collabat
