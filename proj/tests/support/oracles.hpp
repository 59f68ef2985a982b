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

// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check beyond plain forward evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "collabat/classifier.hpp"
#include "collabat/tensor.hpp"

namespace collabat::testing {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Central difference df/dx_k at x.
inline double central_difference(const std::function<double(const Vector&)>& f, Vector x,
                                 Eigen::Index k, double h = kFiniteDifferenceStep) {
  const double original = x(k);
  x(k) = original + h;
  const double up = f(x);
  x(k) = original - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

/// |a - b| / max(|a|, |b|, floor). The floor keeps near-zero gradient
/// components from dominating through finite-difference round-off.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Softmax computed naively: exponentiate, sum, divide, then log.
inline double naive_cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    double z = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c));
    total += -std::log(std::exp(logits(r, labels[static_cast<std::size_t>(r)])) / z);
  }
  return total / static_cast<double>(logits.rows());
}

inline std::vector<double> naive_softmax_row(const Matrix& logits, Eigen::Index r) {
  std::vector<double> p(static_cast<std::size_t>(logits.cols()));
  double z = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c));
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    p[static_cast<std::size_t>(c)] = std::exp(logits(r, c)) / z;
  }
  return p;
}

inline double naive_kl(const Matrix& p_logits, const Matrix& q_logits) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < p_logits.rows(); ++r) {
    const auto p = naive_softmax_row(p_logits, r);
    const auto q = naive_softmax_row(q_logits, r);
    for (std::size_t c = 0; c < p.size(); ++c) total += p[c] * std::log(p[c] / q[c]);
  }
  return total / static_cast<double>(p_logits.rows());
}

inline std::vector<double> naive_cw_margin(const Matrix& logits, const std::vector<int>& labels) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      if (c != y) best = std::max(best, logits(r, c));
    }
    out.push_back(best - logits(r, y));
  }
  return out;
}

inline double scalar_clamp(double candidate, double original, double epsilon) {
  const double lo = std::max(0.0, original - epsilon);
  const double hi = std::min(1.0, original + epsilon);
  return std::min(hi, std::max(lo, candidate));
}

/// Hand matrix multiply: logits(b, c) = sum_k W(c, k) x(b, k) + bias(c).
inline Matrix hand_linear(const Matrix& weight, const Vector& bias, const Matrix& inputs) {
  Matrix out(inputs.rows(), weight.rows());
  for (Eigen::Index b = 0; b < inputs.rows(); ++b) {
    for (Eigen::Index c = 0; c < weight.rows(); ++c) {
      double acc = bias(c);
      for (Eigen::Index k = 0; k < weight.cols(); ++k) acc += weight(c, k) * inputs(b, k);
      out(b, c) = acc;
    }
  }
  return out;
}

/// Maximum of `objective` over the 2^d sign vertices x + eps * s, s in {-1, +1}^d,
/// each projected into the unit box. Single example.
inline double max_over_sign_vertices(const std::function<double(const Matrix&)>& objective,
                                     const Matrix& x, double epsilon) {
  const auto d = static_cast<int>(x.cols());
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    Matrix v = x;
    for (int k = 0; k < d; ++k) {
      const double s = (mask >> k) & 1u ? 1.0 : -1.0;
      v(0, k) = scalar_clamp(x(0, k) + s * epsilon, x(0, k), epsilon);
    }
    best = std::max(best, objective(v));
  }
  return best;
}

/// Model with every bias drawn from N(0, scale^2). Zero biases put ReLU and
/// argmax kinks exactly on inputs that reach a dead layer.
inline Classifier with_random_biases(Classifier model, std::mt19937_64& gen, double scale = 0.1) {
  std::normal_distribution<double> n(0.0, scale);
  ParameterSet params = model.params();
  for (std::size_t g = 0; g < model.groups().size(); ++g) {
    if (model.groups()[g].shape.size() != 1) continue;
    for (Eigen::Index i = 0; i < params[g].size(); ++i) params[g](i) = n(gen);
  }
  model.set_params(std::move(params));
  return model;
}

/// Small models with a linear (no hidden layer) architecture.
inline Classifier linear_model(const Matrix& weight, const Vector& bias) {
  Classifier model(Architecture::mlp(static_cast<int>(weight.cols()), {},
                                     static_cast<int>(weight.rows())));
  ParameterSet params = model.params();
  Eigen::Map<Matrix>(params[0].data(), weight.rows(), weight.cols()) = weight;
  params[1] = bias;
  model.set_params(std::move(params));
  return model;
}

inline Matrix random_unit_box(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                              double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(gen);
  return m;
}

inline Matrix random_logits(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                            double scale = 3.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(gen);
  return m;
}

inline std::vector<int> random_labels(std::size_t n, int classes, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> u(0, classes - 1);
  std::vector<int> labels(n);
  for (auto& y : labels) y = u(gen);
  return labels;
}

inline LabeledBatch random_batch(std::size_t n, InputShape shape, int classes,
                                 std::mt19937_64& gen, double lo = 0.05, double hi = 0.95) {
  LabeledBatch batch;
  batch.shape = shape;
  batch.classes = classes;
  batch.inputs = random_unit_box(static_cast<Eigen::Index>(n), shape.size(), gen, lo, hi);
  batch.labels = random_labels(n, classes, gen);
  return batch;
}

/// Evaluates f at parameters given as one flat vector.
inline std::function<double(const Vector&)> at_flat_params(
    const Classifier& model, const std::function<double(const Classifier&)>& f) {
  return [m = Classifier(model), f](const Vector& flat) mutable {
    ParameterSet params = m.params();
    unflatten(flat, params);
    m.set_params(std::move(params));
    return f(m);
  };
}

/// Evaluates f at batch inputs given as one flat (row-major) vector.
inline std::function<double(const Vector&)> at_flat_inputs(
    const LabeledBatch& batch, const std::function<double(const LabeledBatch&)>& f) {
  return [b = LabeledBatch(batch), f](const Vector& flat) mutable {
    b.inputs = Eigen::Map<const Matrix>(flat.data(), b.inputs.rows(), b.inputs.cols());
    return f(b);
  };
}

inline Vector flat_inputs(const LabeledBatch& batch) {
  return Eigen::Map<const Vector>(batch.inputs.data(), batch.inputs.size());
}

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool bitwise_equal(const ParameterSet& a, const ParameterSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    if (std::memcmp(a[i].data(), b[i].data(), sizeof(double) * static_cast<std::size_t>(a[i].size())) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace collabat::testing
