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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collabat/config.hpp"
#include "collabat/reports.hpp"
#include "collabat/training.hpp"

namespace collabat {

/// Library side of the `collabat` CLI. Each command writes its artifacts under
/// `out_dir` (created if needed) and returns what it wrote.

struct TrainOutcome {
  FitResult fit;
  RunManifest manifest;
};

/// Writes log.csv, <name>_best.ckpt and <name>_last.ckpt per participant,
/// and manifest.json. Throws ConfigError before any training on invalid
/// input and DivergenceError on a non-finite loss.
TrainOutcome run_train(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                       std::ostream* progress = nullptr);

struct EvalOptions {
  std::vector<std::filesystem::path> checkpoints;
  /// With two checkpoints: also write confusion.csv, confusion.json and
  /// discrepancy.json on the inputs of `confusion_attack`.
  bool confusion = false;
  bool zero_diagonal = false;
  std::string confusion_attack = "clean";
  Crafter crafter = Crafter::kFirst;
};

/// Every configured eval attack against every checkpoint, on the test split.
/// Random starts for checkpoint c come from the stream
/// ("eval", c.participant, c.epoch) of train.seed, the same stream training
/// used when it logged that epoch.
RobustnessReport run_eval(const ExperimentConfig& config, const EvalOptions& options,
                          const std::filesystem::path& out_dir);

struct AnalyzeOptions {
  std::filesystem::path first;
  std::filesystem::path second;
  /// Name of a configured eval attack; "clean" needs no entry.
  std::string attack = "clean";
  Crafter crafter = Crafter::kFirst;
  bool zero_diagonal = false;
};

PairAnalysis run_analyze(const ExperimentConfig& config, const AnalyzeOptions& options,
                         const std::filesystem::path& out_dir);

/// Writes train.bin and test.bin in the flat tensor layout.
DatasetSplit run_gen_data(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace collabat
