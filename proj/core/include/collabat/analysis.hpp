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

#include <cstddef>
#include <string>
#include <vector>

#include "collabat/attacks.hpp"
#include "collabat/classifier.hpp"
#include "collabat/rng.hpp"

namespace collabat {

/// Evaluation processes data in fixed-size chunks so that random starts are
/// drawn in the same order no matter who calls it.
inline constexpr std::size_t kEvalBatchSize = 256;

/// Adversarial inputs for the whole dataset, crafted against `model` chunk by
/// chunk. A clean config returns the inputs unchanged; the KL objective uses
/// the model's own clean logits as reference.
Matrix craft_inputs(const Classifier& model, const LabeledBatch& data, const AttackConfig& attack,
                    Rng* rng);

struct ReportEntry {
  std::string attack_name;
  AttackConfig attack;
  std::string model;
  /// Set for transfer entries: the model that crafted the examples.
  std::string surrogate;
  std::size_t correct = 0;
  std::size_t count = 0;
  double accuracy = 0.0;
};

struct RobustnessReport {
  std::vector<ReportEntry> entries;
};

/// White-box accuracy: attacks crafted against `model` itself.
/// Throws std::invalid_argument on an empty dataset.
ReportEntry robust_accuracy(const Classifier& model, const LabeledBatch& data,
                            const AttackConfig& attack, Rng* rng, std::string attack_name = {});

/// Examples crafted against `surrogate`, scored on `target`.
ReportEntry transfer_robustness(const Classifier& surrogate, const Classifier& target,
                                const LabeledBatch& data, const AttackConfig& attack, Rng* rng,
                                std::string attack_name = {});

/// Which model the shared adversarial inputs are crafted against.
enum class Crafter { kFirst, kSecond };

std::string to_string(Crafter crafter);

struct ConfusionMatrix {
  /// counts[i][j]: first model predicts i and second model predicts j.
  std::vector<std::vector<long>> counts;
  std::string row_model;
  std::string column_model;
  std::string attack_name;
  AttackConfig attack;
  std::string crafted_by;

  [[nodiscard]] long total() const;
  [[nodiscard]] long trace() const;
  [[nodiscard]] ConfusionMatrix transposed() const;
  /// C rows of C comma-separated counts; the diagonal is written as 0 when
  /// `zero_diagonal` is set.
  [[nodiscard]] std::string to_csv(bool zero_diagonal = false) const;
};

struct DiscrepancyScore {
  double intersection = 1.0;
  double discrepancy = 0.0;
  std::size_t agreements = 0;
  std::size_t count = 0;
};

DiscrepancyScore discrepancy_from_counts(std::size_t agreements, std::size_t count);
DiscrepancyScore discrepancy_from_confusion(const ConfusionMatrix& confusion);

/// Everything derivable from one shared set of (possibly adversarial) inputs.
struct PairAnalysis {
  ConfusionMatrix confusion;
  DiscrepancyScore discrepancy;
  std::vector<int> first_predictions;
  std::vector<int> second_predictions;
  /// Examples the first model gets right and the second gets wrong, and
  /// the reverse.
  std::size_t only_first_correct = 0;
  std::size_t only_second_correct = 0;
};

/// A clean attack config evaluates both models on the clean inputs.
PairAnalysis analyze_pair(const Classifier& first, const Classifier& second,
                          const LabeledBatch& data, const AttackConfig& attack, Crafter crafter,
                          Rng* rng, const std::string& first_name = "A",
                          const std::string& second_name = "B",
                          const std::string& attack_name = "clean");

ConfusionMatrix cross_confusion(const Classifier& first, const Classifier& second,
                                const LabeledBatch& data, const AttackConfig& attack,
                                Crafter crafter, Rng* rng);

DiscrepancyScore prediction_discrepancy(const Classifier& first, const Classifier& second,
                                        const LabeledBatch& data, const AttackConfig& attack,
                                        Crafter crafter, Rng* rng);

}  // namespace collabat
