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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace collabat {

/// Row-major dense matrix. Batches are stored one example per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-example feature layout. Flat vectors use {d, 1, 1}.
struct InputShape {
  int channels = 1;
  int height = 1;
  int width = 1;

  [[nodiscard]] int size() const { return channels * height * width; }
  bool operator==(const InputShape&) const = default;
};

std::string to_string(const InputShape& shape);

/// Inputs in [0, 1] with one integer label per row.
struct LabeledBatch {
  Matrix inputs;
  std::vector<int> labels;
  int classes = 0;
  InputShape shape;

  [[nodiscard]] std::size_t size() const { return labels.size(); }

  /// Throws ShapeError if inputs leave the unit box, labels fall outside
  /// [0, classes), or row count and label count disagree.
  void validate() const;

  /// Rows `indices` in that order.
  [[nodiscard]] LabeledBatch select(const std::vector<std::size_t>& indices) const;
  [[nodiscard]] LabeledBatch slice(std::size_t begin, std::size_t end) const;
};

struct DatasetSplit {
  LabeledBatch train;
  LabeledBatch test;
};

/// Row-wise max of |a - b|.
double linf_distance(const Matrix& a, const Matrix& b);

}  // namespace collabat
