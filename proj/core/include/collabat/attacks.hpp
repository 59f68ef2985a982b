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

#include <optional>

#include "collabat/classifier.hpp"
#include "collabat/rng.hpp"
#include "collabat/tensor.hpp"

namespace collabat {

struct MethodSpec;

/// L-infinity threat model and PGD schedule.
struct AttackConfig {
  double epsilon = 8.0 / 255.0;
  double step_size = 2.0 / 255.0;
  int iterations = 10;
  bool random_start = true;
  ObjectiveKind objective = ObjectiveKind::kCrossEntropy;

  /// epsilon == 0 is accepted and means "no attack"; otherwise requires
  /// 0 < step_size <= epsilon <= 1 and iterations >= 1.
  void validate() const;
  [[nodiscard]] bool is_clean() const { return epsilon == 0.0; }

  static AttackConfig clean();
  static AttackConfig fgsm(double epsilon);
  static AttackConfig pgd(int iterations, double epsilon = 8.0 / 255.0,
                          double step_size = 2.0 / 255.0, bool random_start = true,
                          ObjectiveKind objective = ObjectiveKind::kCrossEntropy);

  bool operator==(const AttackConfig&) const = default;
};

struct AdversarialBatch {
  Matrix originals;
  Matrix perturbed;
  std::vector<int> labels;

  /// The perturbed inputs paired with the source batch's labels and shape.
  [[nodiscard]] LabeledBatch as_batch(const LabeledBatch& source) const;
};

/// Clamp into [original - eps, original + eps] intersected with [0, 1].
Matrix project_feasible(const Matrix& candidate, const Matrix& original, double epsilon);

/// Single signed-gradient step of size epsilon on the cross-entropy.
AdversarialBatch fgsm(const Classifier& model, const LabeledBatch& batch, double epsilon);

/// Iterated sign-gradient ascent with projection after each step. `rng` is
/// only consumed when config.random_start is set; `reference` must be given
/// exactly when config.objective is KL.
AdversarialBatch pgd(const Classifier& model, const LabeledBatch& batch,
                     const AttackConfig& config, Rng* rng, const Logits* reference = nullptr);

/// Inner maximization for a training method: AT and ALP attack the
/// cross-entropy, TRADES attacks KL against the model's own clean logits.
AdversarialBatch craft_for_method(const Classifier& model, const MethodSpec& method,
                                  const LabeledBatch& batch, const AttackConfig& config,
                                  Rng* rng);

}  // namespace collabat
