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

#include <span>
#include <string>
#include <string_view>

#include "collabat/tensor.hpp"

namespace collabat {

/// Attack objectives understood by input_gradient and pgd.
enum class ObjectiveKind { kCrossEntropy, kKl, kCwMargin };

std::string to_string(ObjectiveKind kind);
/// Accepts "CE", "KL", "CW" (case-sensitive).
ObjectiveKind parse_objective(std::string_view text);

/// Value of a batch-mean loss together with its gradient w.r.t. the logits.
struct LogitLoss {
  double value = 0.0;
  Matrix grad;
};

/// Loss of two logit matrices with gradients w.r.t. both.
struct PairLoss {
  double value = 0.0;
  Matrix grad_first;
  Matrix grad_second;
};

Matrix log_softmax(const Matrix& logits);
Matrix softmax(const Matrix& logits);

/// Mean over rows of -log softmax(logits)[label], log-sum-exp stabilized.
double cross_entropy(const Matrix& logits, std::span<const int> labels);
LogitLoss cross_entropy_with_grad(const Matrix& logits, std::span<const int> labels);

/// Mean over rows of KL(softmax(first) || softmax(second)).
double kl_divergence(const Matrix& first, const Matrix& second);
PairLoss kl_divergence_with_grad(const Matrix& first, const Matrix& second);

/// Per-row max_{j != y} z_j - z_y (confidence 0). Positive means misclassified.
Vector cw_margin_objective(const Matrix& logits, std::span<const int> labels);
/// Mean of cw_margin_objective. The runner-up is the lowest index among ties.
LogitLoss cw_margin_with_grad(const Matrix& logits, std::span<const int> labels);

/// Mean over all entries of (first - second)^2.
PairLoss mean_squared_difference_with_grad(const Matrix& first, const Matrix& second);

}  // namespace collabat
