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

#include "collabat/classifier.hpp"

#include <cmath>
#include <stdexcept>

namespace collabat {
namespace {

constexpr int kKernel = 3;
constexpr int kPad = 1;
constexpr int kConvLayers = 4;
constexpr int kConvStrides[kConvLayers] = {1, 2, 1, 2};

struct LayerOp {
  enum class Kind { kDense, kConv, kRelu };
  Kind kind = Kind::kRelu;
  int weight = -1;
  int bias = -1;
  int in_features = 0;
  int out_features = 0;
  // Convolution geometry.
  InputShape in;
  InputShape out;
  int stride = 1;
};

struct Layout {
  std::vector<LayerOp> ops;
  std::vector<ParamGroupInfo> groups;
};

Layout build_layout(const Architecture& arch) {
  arch.validate();
  Layout layout;
  auto add_group = [&](std::string name, std::vector<int> shape) {
    layout.groups.push_back({std::move(name), std::move(shape)});
    return static_cast<int>(layout.groups.size()) - 1;
  };
  auto add_dense = [&](int in, int out, int index) {
    LayerOp op;
    op.kind = LayerOp::Kind::kDense;
    op.in_features = in;
    op.out_features = out;
    op.weight = add_group("dense" + std::to_string(index) + ".weight", {out, in});
    op.bias = add_group("dense" + std::to_string(index) + ".bias", {out});
    layout.ops.push_back(op);
  };
  auto add_relu = [&](int features) {
    LayerOp op;
    op.kind = LayerOp::Kind::kRelu;
    op.in_features = features;
    op.out_features = features;
    layout.ops.push_back(op);
  };

  if (arch.kind == Architecture::Kind::kMlp) {
    int in = arch.input.size();
    int index = 0;
    for (int width : arch.widths) {
      add_dense(in, width, index++);
      add_relu(width);
      in = width;
    }
    add_dense(in, arch.classes, index);
    return layout;
  }

  InputShape shape = arch.input;
  for (int i = 0; i < kConvLayers; ++i) {
    LayerOp op;
    op.kind = LayerOp::Kind::kConv;
    op.in = shape;
    op.stride = kConvStrides[i];
    op.out.channels = arch.widths[static_cast<std::size_t>(i)];
    op.out.height = (shape.height + 2 * kPad - kKernel) / op.stride + 1;
    op.out.width = (shape.width + 2 * kPad - kKernel) / op.stride + 1;
    op.in_features = op.in.size();
    op.out_features = op.out.size();
    op.weight = add_group("conv" + std::to_string(i) + ".weight",
                          {op.out.channels, shape.channels * kKernel * kKernel});
    op.bias = add_group("conv" + std::to_string(i) + ".bias", {op.out.channels});
    layout.ops.push_back(op);
    add_relu(op.out_features);
    shape = op.out;
  }
  add_dense(shape.size(), arch.classes, 0);
  return layout;
}

Layout layout_for(const Architecture& arch) { return build_layout(arch); }

using ConstMatrixMap = Eigen::Map<const Matrix>;
using MatrixMap = Eigen::Map<Matrix>;

// Columns are (example, output pixel); rows are (channel, ky, kx).
Matrix im2col(const Matrix& input, const LayerOp& op) {
  const int batch = static_cast<int>(input.rows());
  const int pixels = op.out.height * op.out.width;
  Matrix col = Matrix::Zero(op.in.channels * kKernel * kKernel,
                            static_cast<Eigen::Index>(batch) * pixels);
  const int in_plane = op.in.height * op.in.width;
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < op.in.channels; ++c) {
      for (int ky = 0; ky < kKernel; ++ky) {
        for (int kx = 0; kx < kKernel; ++kx) {
          const Eigen::Index row = (c * kKernel + ky) * kKernel + kx;
          for (int oy = 0; oy < op.out.height; ++oy) {
            const int iy = oy * op.stride - kPad + ky;
            if (iy < 0 || iy >= op.in.height) continue;
            for (int ox = 0; ox < op.out.width; ++ox) {
              const int ix = ox * op.stride - kPad + kx;
              if (ix < 0 || ix >= op.in.width) continue;
              col(row, static_cast<Eigen::Index>(b) * pixels + oy * op.out.width + ox) =
                  input(b, c * in_plane + iy * op.in.width + ix);
            }
          }
        }
      }
    }
  }
  return col;
}

Matrix col2im(const Matrix& col, const LayerOp& op, int batch) {
  const int pixels = op.out.height * op.out.width;
  const int in_plane = op.in.height * op.in.width;
  Matrix input = Matrix::Zero(batch, op.in.size());
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < op.in.channels; ++c) {
      for (int ky = 0; ky < kKernel; ++ky) {
        for (int kx = 0; kx < kKernel; ++kx) {
          const Eigen::Index row = (c * kKernel + ky) * kKernel + kx;
          for (int oy = 0; oy < op.out.height; ++oy) {
            const int iy = oy * op.stride - kPad + ky;
            if (iy < 0 || iy >= op.in.height) continue;
            for (int ox = 0; ox < op.out.width; ++ox) {
              const int ix = ox * op.stride - kPad + kx;
              if (ix < 0 || ix >= op.in.width) continue;
              input(b, c * in_plane + iy * op.in.width + ix) +=
                  col(row, static_cast<Eigen::Index>(b) * pixels + oy * op.out.width + ox);
            }
          }
        }
      }
    }
  }
  return input;
}

ConstMatrixMap weight_map(const ParameterSet& params, const LayerOp& op, int rows, int cols) {
  return ConstMatrixMap(params[static_cast<std::size_t>(op.weight)].data(), rows, cols);
}

Matrix apply(const LayerOp& op, const ParameterSet& params, const Matrix& x) {
  switch (op.kind) {
    case LayerOp::Kind::kRelu:
      return x.cwiseMax(0.0);
    case LayerOp::Kind::kDense: {
      const auto w = weight_map(params, op, op.out_features, op.in_features);
      const Vector& b = params[static_cast<std::size_t>(op.bias)];
      Matrix y = x * w.transpose();
      y.rowwise() += b.transpose();
      return y;
    }
    case LayerOp::Kind::kConv: {
      const int batch = static_cast<int>(x.rows());
      const int pixels = op.out.height * op.out.width;
      const auto w = weight_map(params, op, op.out.channels, op.in.channels * kKernel * kKernel);
      const Vector& bias = params[static_cast<std::size_t>(op.bias)];
      const Matrix out = w * im2col(x, op);
      Matrix y(batch, op.out.size());
      for (int b = 0; b < batch; ++b) {
        for (int k = 0; k < op.out.channels; ++k) {
          y.row(b).segment(static_cast<Eigen::Index>(k) * pixels, pixels) =
              out.row(k).segment(static_cast<Eigen::Index>(b) * pixels, pixels).array() +
              bias(k);
        }
      }
      return y;
    }
  }
  return x;
}

}  // namespace

std::string to_string(Architecture::Kind kind) {
  return kind == Architecture::Kind::kMlp ? "mlp" : "conv";
}

Architecture Architecture::mlp(int input_dim, std::vector<int> hidden, int classes) {
  Architecture arch;
  arch.kind = Kind::kMlp;
  arch.input = {input_dim, 1, 1};
  arch.widths = std::move(hidden);
  arch.classes = classes;
  return arch;
}

Architecture Architecture::conv(InputShape input, std::vector<int> channels, int classes) {
  Architecture arch;
  arch.kind = Kind::kConv;
  arch.input = input;
  arch.widths = std::move(channels);
  arch.classes = classes;
  return arch;
}

void Architecture::validate() const {
  if (classes < 1) throw std::invalid_argument("architecture needs at least one class");
  if (input.channels < 1 || input.height < 1 || input.width < 1) {
    throw std::invalid_argument("architecture input shape must be positive");
  }
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("architecture layer widths must be positive");
  }
  if (kind == Kind::kConv) {
    if (widths.size() != kConvLayers) {
      throw std::invalid_argument("conv architecture needs exactly 4 channel widths");
    }
    if (input.height % 4 != 0 || input.width % 4 != 0) {
      throw std::invalid_argument("conv architecture needs height and width divisible by 4");
    }
  }
}

int ParamGroupInfo::size() const {
  int n = 1;
  for (int s : shape) n *= s;
  return n;
}

Vector flatten(const ParameterSet& params) {
  Eigen::Index total = 0;
  for (const auto& p : params) total += p.size();
  Vector flat(total);
  Eigen::Index offset = 0;
  for (const auto& p : params) {
    flat.segment(offset, p.size()) = p;
    offset += p.size();
  }
  return flat;
}

void unflatten(const Vector& flat, ParameterSet& params) {
  Eigen::Index offset = 0;
  for (auto& p : params) {
    if (offset + p.size() > flat.size()) throw ShapeError("unflatten: vector too short");
    p = flat.segment(offset, p.size());
    offset += p.size();
  }
  if (offset != flat.size()) throw ShapeError("unflatten: vector too long");
}

ParameterSet zeros_like(const ParameterSet& params) {
  ParameterSet out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Vector::Zero(p.size()));
  return out;
}

Classifier::Classifier(Architecture architecture) : architecture_(std::move(architecture)) {
  groups_ = layout_for(architecture_).groups;
  for (const auto& g : groups_) params_.push_back(Vector::Zero(g.size()));
}

Classifier::Classifier(Architecture architecture, Rng& rng)
    : Classifier(std::move(architecture)) {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& g = groups_[i];
    if (g.shape.size() != 2) continue;  // biases stay zero
    const bool last = i + 2 == groups_.size();
    const double fan_in = g.shape[1];
    const double stddev = std::sqrt((last ? 1.0 : 2.0) / fan_in);
    for (Eigen::Index k = 0; k < params_[i].size(); ++k) params_[i](k) = rng.normal(0.0, stddev);
  }
}

std::size_t Classifier::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.size());
  return n;
}

void Classifier::set_params(ParameterSet params) {
  if (params.size() != params_.size()) throw ShapeError("parameter group count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != params_[i].size()) {
      throw ShapeError("parameter group '" + groups_[i].name + "' has wrong size");
    }
  }
  params_ = std::move(params);
}

ForwardPass forward(const Classifier& model, const Matrix& inputs) {
  if (inputs.cols() != model.architecture().input.size()) {
    throw ShapeError("model expects " + std::to_string(model.architecture().input.size()) +
                     " input features, got " + std::to_string(inputs.cols()));
  }
  const Layout layout = layout_for(model.architecture());
  ForwardPass pass;
  pass.layer_inputs.reserve(layout.ops.size());
  Matrix x = inputs;
  for (const auto& op : layout.ops) {
    Matrix y = apply(op, model.params(), x);
    pass.layer_inputs.push_back(std::move(x));
    x = std::move(y);
  }
  pass.logits = std::move(x);
  return pass;
}

BackwardResult backward(const Classifier& model, const ForwardPass& pass,
                        const Matrix& logit_grad, GradientTargets targets) {
  const Layout layout = layout_for(model.architecture());
  if (pass.layer_inputs.size() != layout.ops.size()) {
    throw ShapeError("forward pass does not belong to this model");
  }
  if (logit_grad.rows() != pass.logits.rows() || logit_grad.cols() != pass.logits.cols()) {
    throw ShapeError("logit gradient shape does not match the forward pass");
  }
  const bool want_params = targets != GradientTargets::kInputs;
  const bool want_inputs = targets != GradientTargets::kParameters;
  BackwardResult result;
  if (want_params) result.param_grad = zeros_like(model.params());

  Matrix grad = logit_grad;
  for (std::size_t i = layout.ops.size(); i-- > 0;) {
    const LayerOp& op = layout.ops[i];
    const Matrix& x = pass.layer_inputs[i];
    const bool need_input_grad = want_inputs || i > 0;
    switch (op.kind) {
      case LayerOp::Kind::kRelu:
        grad = (x.array() > 0.0).select(grad, 0.0);
        break;
      case LayerOp::Kind::kDense: {
        const auto w = weight_map(model.params(), op, op.out_features, op.in_features);
        if (want_params) {
          MatrixMap(result.param_grad[static_cast<std::size_t>(op.weight)].data(),
                    op.out_features, op.in_features) = grad.transpose() * x;
          result.param_grad[static_cast<std::size_t>(op.bias)] = grad.colwise().sum().transpose();
        }
        if (need_input_grad) grad = grad * w;
        break;
      }
      case LayerOp::Kind::kConv: {
        const int batch = static_cast<int>(x.rows());
        const int pixels = op.out.height * op.out.width;
        const int patch = op.in.channels * kKernel * kKernel;
        Matrix grad_out(op.out.channels, static_cast<Eigen::Index>(batch) * pixels);
        for (int b = 0; b < batch; ++b) {
          for (int k = 0; k < op.out.channels; ++k) {
            grad_out.row(k).segment(static_cast<Eigen::Index>(b) * pixels, pixels) =
                grad.row(b).segment(static_cast<Eigen::Index>(k) * pixels, pixels);
          }
        }
        if (want_params) {
          const Matrix col = im2col(x, op);
          MatrixMap(result.param_grad[static_cast<std::size_t>(op.weight)].data(),
                    op.out.channels, patch) = grad_out * col.transpose();
          result.param_grad[static_cast<std::size_t>(op.bias)] = grad_out.rowwise().sum();
        }
        if (need_input_grad) {
          const auto w = weight_map(model.params(), op, op.out.channels, patch);
          grad = col2im(w.transpose() * grad_out, op, batch);
        }
        break;
      }
    }
  }
  if (want_inputs) result.input_grad = std::move(grad);
  return result;
}

Logits forward_logits(const Classifier& model, const Matrix& inputs) {
  return forward(model, inputs).logits;
}

std::vector<int> argmax_rows(const Logits& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()), 0);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(r, c) > logits(r, best)) best = static_cast<int>(c);
    }
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

std::vector<int> predict(const Classifier& model, const Matrix& inputs) {
  return argmax_rows(forward_logits(model, inputs));
}

namespace {

void check_reference(const LabeledBatch& batch, ObjectiveKind objective, const Logits* reference,
                     int classes) {
  if (objective == ObjectiveKind::kKl) {
    if (reference == nullptr) {
      throw std::invalid_argument("KL objective requires reference logits");
    }
    if (reference->rows() != batch.inputs.rows() || reference->cols() != classes) {
      throw ShapeError("KL reference logits have the wrong shape");
    }
  } else if (reference != nullptr) {
    throw std::invalid_argument("reference logits are only accepted for the KL objective");
  }
}

LogitLoss objective_on_logits(const Logits& logits, const LabeledBatch& batch,
                              ObjectiveKind objective, const Logits* reference) {
  switch (objective) {
    case ObjectiveKind::kCrossEntropy:
      return cross_entropy_with_grad(logits, batch.labels);
    case ObjectiveKind::kCwMargin:
      return cw_margin_with_grad(logits, batch.labels);
    case ObjectiveKind::kKl: {
      PairLoss kl = kl_divergence_with_grad(*reference, logits);
      return {kl.value, std::move(kl.grad_second)};
    }
  }
  throw std::logic_error("unhandled objective");
}

}  // namespace

ObjectiveGradient objective_gradient(const Classifier& model, const LabeledBatch& batch,
                                     ObjectiveKind objective, const Logits* reference) {
  check_reference(batch, objective, reference, model.classes());
  const ForwardPass pass = forward(model, batch.inputs);
  LogitLoss loss = objective_on_logits(pass.logits, batch, objective, reference);
  ObjectiveGradient out;
  out.value = loss.value;
  out.input_grad = backward(model, pass, loss.grad, GradientTargets::kInputs).input_grad;
  return out;
}

Matrix input_gradient(const Classifier& model, const LabeledBatch& batch,
                      ObjectiveKind objective, const Logits* reference) {
  return objective_gradient(model, batch, objective, reference).input_grad;
}

double objective_value(const Classifier& model, const LabeledBatch& batch,
                       ObjectiveKind objective, const Logits* reference) {
  check_reference(batch, objective, reference, model.classes());
  const Logits logits = forward_logits(model, batch.inputs);
  switch (objective) {
    case ObjectiveKind::kCrossEntropy: return cross_entropy(logits, batch.labels);
    case ObjectiveKind::kCwMargin: return cw_margin_objective(logits, batch.labels).mean();
    case ObjectiveKind::kKl: return kl_divergence(*reference, logits);
  }
  throw std::logic_error("unhandled objective");
}

}  // namespace collabat
