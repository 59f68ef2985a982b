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

#include "collabat/tensor.hpp"

#include <sstream>

namespace collabat {

std::string to_string(const InputShape& shape) {
  std::ostringstream out;
  out << "(" << shape.channels << ", " << shape.height << ", " << shape.width << ")";
  return out.str();
}

void LabeledBatch::validate() const {
  if (static_cast<std::size_t>(inputs.rows()) != labels.size()) {
    throw ShapeError("batch has " + std::to_string(inputs.rows()) + " rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (inputs.cols() != shape.size()) {
    throw ShapeError("batch rows have " + std::to_string(inputs.cols()) +
                     " features, shape " + to_string(shape) + " expects " +
                     std::to_string(shape.size()));
  }
  if (classes < 1) throw ShapeError("batch class count must be positive");
  if (inputs.size() > 0 && (inputs.minCoeff() < 0.0 || inputs.maxCoeff() > 1.0)) {
    throw ShapeError("batch inputs must lie in [0, 1]");
  }
  for (int label : labels) {
    if (label < 0 || label >= classes) {
      throw ShapeError("label " + std::to_string(label) + " outside [0, " +
                       std::to_string(classes) + ")");
    }
  }
}

LabeledBatch LabeledBatch::select(const std::vector<std::size_t>& indices) const {
  LabeledBatch out;
  out.classes = classes;
  out.shape = shape;
  out.inputs.resize(static_cast<Eigen::Index>(indices.size()), inputs.cols());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.inputs.row(static_cast<Eigen::Index>(r)) =
        inputs.row(static_cast<Eigen::Index>(indices[r]));
    out.labels.push_back(labels[indices[r]]);
  }
  return out;
}

LabeledBatch LabeledBatch::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw ShapeError("slice out of range");
  LabeledBatch out;
  out.classes = classes;
  out.shape = shape;
  out.inputs = inputs.middleRows(static_cast<Eigen::Index>(begin),
                                 static_cast<Eigen::Index>(end - begin));
  out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                    labels.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

double linf_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("linf_distance: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace collabat
