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

#include "collabat/attacks.hpp"

#include <algorithm>
#include <stdexcept>

#include "collabat/objectives.hpp"

namespace collabat {

void AttackConfig::validate() const {
  if (epsilon == 0.0) return;
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("attack epsilon must lie in (0, 1]");
  }
  if (!(step_size > 0.0 && step_size <= epsilon)) {
    throw std::invalid_argument("attack step_size must lie in (0, epsilon]");
  }
  if (iterations < 1) throw std::invalid_argument("attack iterations must be >= 1");
}

AttackConfig AttackConfig::clean() {
  AttackConfig c;
  c.epsilon = 0.0;
  c.step_size = 0.0;
  c.iterations = 0;
  c.random_start = false;
  return c;
}

AttackConfig AttackConfig::fgsm(double epsilon) {
  return pgd(1, epsilon, epsilon, false, ObjectiveKind::kCrossEntropy);
}

AttackConfig AttackConfig::pgd(int iterations, double epsilon, double step_size,
                               bool random_start, ObjectiveKind objective) {
  AttackConfig c;
  c.epsilon = epsilon;
  c.step_size = step_size;
  c.iterations = iterations;
  c.random_start = random_start;
  c.objective = objective;
  return c;
}

LabeledBatch AdversarialBatch::as_batch(const LabeledBatch& source) const {
  LabeledBatch out;
  out.inputs = perturbed;
  out.labels = labels;
  out.classes = source.classes;
  out.shape = source.shape;
  return out;
}

Matrix project_feasible(const Matrix& candidate, const Matrix& original, double epsilon) {
  if (candidate.rows() != original.rows() || candidate.cols() != original.cols()) {
    throw ShapeError("project_feasible: candidate and original differ in shape");
  }
  const Matrix lo = (original.array() - epsilon).cwiseMax(0.0);
  const Matrix hi = (original.array() + epsilon).cwiseMin(1.0);
  return candidate.cwiseMax(lo).cwiseMin(hi);
}

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

AdversarialBatch pgd(const Classifier& model, const LabeledBatch& batch,
                     const AttackConfig& config, Rng* rng, const Logits* reference) {
  config.validate();
  if (config.objective == ObjectiveKind::kKl && reference == nullptr) {
    throw std::invalid_argument("PGD with the KL objective requires reference logits");
  }
  if (config.objective != ObjectiveKind::kKl && reference != nullptr) {
    throw std::invalid_argument("reference logits are only accepted for the KL objective");
  }
  AdversarialBatch out;
  out.originals = batch.inputs;
  out.labels = batch.labels;
  out.perturbed = batch.inputs;
  if (config.is_clean()) return out;

  if (config.random_start) {
    if (rng == nullptr) throw std::invalid_argument("random start requires an Rng");
    Matrix start = batch.inputs;
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      start.data()[i] += rng->uniform(-config.epsilon, config.epsilon);
    }
    out.perturbed = project_feasible(start, batch.inputs, config.epsilon);
  }

  LabeledBatch current = batch;
  for (int it = 0; it < config.iterations; ++it) {
    current.inputs = out.perturbed;
    const Matrix grad = input_gradient(model, current, config.objective, reference);
    const Matrix stepped = out.perturbed + config.step_size * grad.unaryExpr(&sign);
    out.perturbed = project_feasible(stepped, batch.inputs, config.epsilon);
  }
  return out;
}

AdversarialBatch fgsm(const Classifier& model, const LabeledBatch& batch, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("FGSM epsilon must lie in (0, 1]");
  }
  return pgd(model, batch, AttackConfig::fgsm(epsilon), nullptr);
}

AdversarialBatch craft_for_method(const Classifier& model, const MethodSpec& method,
                                  const LabeledBatch& batch, const AttackConfig& config,
                                  Rng* rng) {
  AttackConfig c = config;
  switch (method.kind) {
    case MethodKind::kAt:
    case MethodKind::kAlp:
      c.objective = ObjectiveKind::kCrossEntropy;
      return pgd(model, batch, c, rng);
    case MethodKind::kTrades: {
      c.objective = ObjectiveKind::kKl;
      const Logits clean = forward_logits(model, batch.inputs);
      return pgd(model, batch, c, rng, &clean);
    }
  }
  throw std::logic_error("unhandled method kind");
}

}  // namespace collabat
