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

#include "collabat/losses.hpp"

#include <cmath>

namespace collabat {
namespace {

void check_labels(const Matrix& logits, std::span<const int> labels) {
  if (static_cast<std::size_t>(logits.rows()) != labels.size()) {
    throw ShapeError("logits have " + std::to_string(logits.rows()) + " rows but " +
                     std::to_string(labels.size()) + " labels were given");
  }
  for (int y : labels) {
    if (y < 0 || y >= logits.cols()) {
      throw ShapeError("label " + std::to_string(y) + " outside [0, " +
                       std::to_string(logits.cols()) + ")");
    }
  }
}

void check_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("logit matrices differ in shape");
  }
}

}  // namespace

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kCrossEntropy: return "CE";
    case ObjectiveKind::kKl: return "KL";
    case ObjectiveKind::kCwMargin: return "CW";
  }
  return "?";
}

ObjectiveKind parse_objective(std::string_view text) {
  if (text == "CE") return ObjectiveKind::kCrossEntropy;
  if (text == "KL") return ObjectiveKind::kKl;
  if (text == "CW") return ObjectiveKind::kCwMargin;
  throw std::invalid_argument("unknown attack objective '" + std::string(text) +
                              "' (expected CE, KL or CW)");
}

Matrix log_softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    const double lse = m + std::log((logits.row(r).array() - m).exp().sum());
    out.row(r) = logits.row(r).array() - lse;
  }
  return out;
}

Matrix softmax(const Matrix& logits) { return log_softmax(logits).array().exp(); }

double cross_entropy(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  if (logits.rows() == 0) return 0.0;
  const Matrix logp = log_softmax(logits);
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) total -= logp(r, labels[r]);
  return total / static_cast<double>(logits.rows());
}

LogitLoss cross_entropy_with_grad(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  LogitLoss out;
  out.value = cross_entropy(logits, labels);
  out.grad = softmax(logits);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) out.grad(r, labels[r]) -= 1.0;
  if (logits.rows() > 0) out.grad /= static_cast<double>(logits.rows());
  return out;
}

double kl_divergence(const Matrix& first, const Matrix& second) {
  check_same_shape(first, second);
  if (first.rows() == 0) return 0.0;
  const Matrix logp = log_softmax(first);
  const Matrix logq = log_softmax(second);
  const double total = (logp.array().exp() * (logp - logq).array()).sum();
  return total / static_cast<double>(first.rows());
}

PairLoss kl_divergence_with_grad(const Matrix& first, const Matrix& second) {
  check_same_shape(first, second);
  PairLoss out;
  out.value = kl_divergence(first, second);
  const Matrix logp = log_softmax(first);
  const Matrix logq = log_softmax(second);
  const Matrix p = logp.array().exp();
  const Matrix q = logq.array().exp();
  const Matrix diff = logp - logq;
  // d/dfirst_c = p_c (log p_c - log q_c - KL_row); d/dsecond_c = q_c - p_c.
  out.grad_first.resize(first.rows(), first.cols());
  for (Eigen::Index r = 0; r < first.rows(); ++r) {
    const double row_kl = (p.row(r).array() * diff.row(r).array()).sum();
    out.grad_first.row(r) = p.row(r).array() * (diff.row(r).array() - row_kl);
  }
  out.grad_second = q - p;
  if (first.rows() > 0) {
    const double inv = 1.0 / static_cast<double>(first.rows());
    out.grad_first *= inv;
    out.grad_second *= inv;
  }
  return out;
}

namespace {

Eigen::Index runner_up(const Matrix& logits, Eigen::Index r, int label) {
  Eigen::Index best = -1;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    if (c == label) continue;
    if (best < 0 || logits(r, c) > logits(r, best)) best = c;
  }
  return best;
}

}  // namespace

Vector cw_margin_objective(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  if (logits.cols() < 2) throw ShapeError("CW margin needs at least two classes");
  Vector out(logits.rows());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const Eigen::Index j = runner_up(logits, r, labels[r]);
    out(r) = logits(r, j) - logits(r, labels[r]);
  }
  return out;
}

LogitLoss cw_margin_with_grad(const Matrix& logits, std::span<const int> labels) {
  const Vector margins = cw_margin_objective(logits, labels);
  LogitLoss out;
  out.grad = Matrix::Zero(logits.rows(), logits.cols());
  if (logits.rows() == 0) return out;
  const double inv = 1.0 / static_cast<double>(logits.rows());
  out.value = margins.mean();
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    out.grad(r, runner_up(logits, r, labels[r])) += inv;
    out.grad(r, labels[r]) -= inv;
  }
  return out;
}

PairLoss mean_squared_difference_with_grad(const Matrix& first, const Matrix& second) {
  check_same_shape(first, second);
  PairLoss out;
  if (first.size() == 0) {
    out.grad_first = Matrix::Zero(first.rows(), first.cols());
    out.grad_second = out.grad_first;
    return out;
  }
  const Matrix diff = first - second;
  const double n = static_cast<double>(first.size());
  out.value = diff.squaredNorm() / n;
  out.grad_first = (2.0 / n) * diff;
  out.grad_second = -out.grad_first;
  return out;
}

}  // namespace collabat
