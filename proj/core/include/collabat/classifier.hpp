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
#include <optional>
#include <string>
#include <vector>

#include "collabat/losses.hpp"
#include "collabat/rng.hpp"
#include "collabat/tensor.hpp"

namespace collabat {

/// Logits, one row per example and one column per class.
using Logits = Matrix;

/// Small architecture zoo.
///
/// kMlp: dense layers with ReLU between them; `widths` are the hidden layer
/// sizes, so an empty list is a linear model.
/// kConv: four 3x3 convolutions (padding 1, strides 1, 2, 1, 2) with ReLU,
/// followed by one dense layer; `widths` are the four output channel counts.
/// Input height and width must be divisible by 4.
struct Architecture {
  enum class Kind { kMlp, kConv };

  Kind kind = Kind::kMlp;
  InputShape input;
  std::vector<int> widths;
  int classes = 2;

  static Architecture mlp(int input_dim, std::vector<int> hidden, int classes);
  static Architecture conv(InputShape input, std::vector<int> channels, int classes);

  /// Throws std::invalid_argument on inconsistent geometry.
  void validate() const;
  bool operator==(const Architecture&) const = default;
};

std::string to_string(Architecture::Kind kind);

/// Shape metadata for one parameter tensor. Dense weights are (out, in),
/// convolution weights (out_channels, in_channels * 9), biases (n).
struct ParamGroupInfo {
  std::string name;
  std::vector<int> shape;

  [[nodiscard]] int size() const;
};

/// One vector per parameter group.
using ParameterSet = std::vector<Vector>;

Vector flatten(const ParameterSet& params);
void unflatten(const Vector& flat, ParameterSet& params);
ParameterSet zeros_like(const ParameterSet& params);

/// A differentiable classifier: architecture plus parameter values.
/// Scoring is deterministic; there are no stochastic layers.
class Classifier {
 public:
  /// All parameters zero.
  explicit Classifier(Architecture architecture);
  /// He-normal weights, zero biases, drawn from `rng`.
  Classifier(Architecture architecture, Rng& rng);

  [[nodiscard]] const Architecture& architecture() const { return architecture_; }
  [[nodiscard]] int classes() const { return architecture_.classes; }
  [[nodiscard]] const std::vector<ParamGroupInfo>& groups() const { return groups_; }
  [[nodiscard]] const ParameterSet& params() const { return params_; }
  ParameterSet& params() { return params_; }
  [[nodiscard]] std::size_t parameter_count() const;

  /// Replaces all values; throws ShapeError if the group layout differs.
  void set_params(ParameterSet params);

 private:
  Architecture architecture_;
  std::vector<ParamGroupInfo> groups_;
  ParameterSet params_;
};

/// Activations retained for a backward pass.
struct ForwardPass {
  std::vector<Matrix> layer_inputs;
  Logits logits;
};

struct BackwardResult {
  Matrix input_grad;
  ParameterSet param_grad;
};

enum class GradientTargets { kInputs, kParameters, kBoth };

ForwardPass forward(const Classifier& model, const Matrix& inputs);

/// Backpropagates `logit_grad` (dLoss/dLogits) through the cached pass.
BackwardResult backward(const Classifier& model, const ForwardPass& pass,
                        const Matrix& logit_grad, GradientTargets targets);

/// Throws ShapeError if `inputs` does not match the architecture's input size.
Logits forward_logits(const Classifier& model, const Matrix& inputs);

/// Argmax per row; ties go to the lowest class index.
std::vector<int> predict(const Classifier& model, const Matrix& inputs);
std::vector<int> argmax_rows(const Logits& logits);

/// Batch-mean objective value and its gradient w.r.t. the inputs.
struct ObjectiveGradient {
  double value = 0.0;
  Matrix input_grad;
};

/// Gradient of the batch-mean objective w.r.t. the batch inputs.
///   kCrossEntropy: CE(logits, labels)
///   kKl:           KL(softmax(reference) || softmax(logits)), reference required
///   kCwMargin:     max_{j != y} z_j - z_y
/// Throws std::invalid_argument when the KL reference is missing or supplied
/// for a different objective.
ObjectiveGradient objective_gradient(const Classifier& model, const LabeledBatch& batch,
                                     ObjectiveKind objective,
                                     const Logits* reference = nullptr);

Matrix input_gradient(const Classifier& model, const LabeledBatch& batch,
                      ObjectiveKind objective, const Logits* reference = nullptr);

/// Batch-mean objective value without gradients.
double objective_value(const Classifier& model, const LabeledBatch& batch,
                       ObjectiveKind objective, const Logits* reference = nullptr);

}  // namespace collabat
