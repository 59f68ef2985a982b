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

#include "collabat/objectives.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace collabat {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::kAt: return "AT";
    case MethodKind::kTrades: return "TRADES";
    case MethodKind::kAlp: return "ALP";
  }
  return "?";
}

MethodKind parse_method(std::string_view text) {
  if (text == "AT") return MethodKind::kAt;
  if (text == "TRADES") return MethodKind::kTrades;
  if (text == "ALP") return MethodKind::kAlp;
  throw std::invalid_argument("unknown method kind '" + std::string(text) +
                              "' (expected AT, TRADES or ALP)");
}

void MethodSpec::validate() const {
  if (kind != MethodKind::kAt && !(lambda > 0.0 && std::isfinite(lambda))) {
    throw std::invalid_argument(to_string(kind) + " requires lambda > 0");
  }
}

std::string to_string(CollabMode mode) {
  return mode == CollabMode::kPeers ? "peers" : "dual-attack";
}

CollabMode parse_collab_mode(std::string_view text) {
  if (text == "peers") return CollabMode::kPeers;
  if (text == "dual-attack") return CollabMode::kDualAttack;
  throw std::invalid_argument("unknown collab mode '" + std::string(text) +
                              "' (expected peers or dual-attack)");
}

void CollabConfig::validate() const {
  if (alpha == 0.0 && !allow_zero_alpha) {
    throw std::invalid_argument(
        "collab.alpha = 0 trains on the collaborative loss alone and collapses; "
        "alpha must lie in (0, 1]");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("collab.alpha must lie in (0, 1]");
  }
}

namespace {

// Loss of one method expressed on logits; empty clean_grad means the clean
// logits do not enter the loss.
struct MethodLogitLoss {
  double value = 0.0;
  Matrix clean_grad;
  Matrix adv_grad;
};

bool needs_clean(const MethodSpec& method) { return method.kind != MethodKind::kAt; }

MethodLogitLoss method_on_logits(const MethodSpec& method, const Logits* clean,
                                 const Logits& adv, std::span<const int> labels) {
  MethodLogitLoss out;
  switch (method.kind) {
    case MethodKind::kAt: {
      LogitLoss ce = cross_entropy_with_grad(adv, labels);
      out.value = ce.value;
      out.adv_grad = std::move(ce.grad);
      break;
    }
    case MethodKind::kTrades: {
      LogitLoss ce = cross_entropy_with_grad(*clean, labels);
      PairLoss kl = kl_divergence_with_grad(*clean, adv);
      out.value = ce.value + method.lambda * kl.value;
      out.clean_grad = ce.grad + method.lambda * kl.grad_first;
      out.adv_grad = method.lambda * kl.grad_second;
      break;
    }
    case MethodKind::kAlp: {
      LogitLoss ce = cross_entropy_with_grad(adv, labels);
      PairLoss msd = mean_squared_difference_with_grad(*clean, adv);
      out.value = ce.value + method.lambda * msd.value;
      out.clean_grad = method.lambda * msd.grad_first;
      out.adv_grad = ce.grad + method.lambda * msd.grad_second;
      break;
    }
  }
  return out;
}

void add_into(ParameterSet& acc, const ParameterSet& term) {
  for (std::size_t g = 0; g < acc.size(); ++g) acc[g] += term[g];
}

void check_pair(const LabeledBatch& clean, const LabeledBatch& adversarial) {
  if (clean.inputs.rows() != adversarial.inputs.rows() ||
      clean.inputs.cols() != adversarial.inputs.cols()) {
    throw ShapeError("clean and adversarial batches differ in shape");
  }
  if (clean.labels != adversarial.labels) {
    throw ShapeError("clean and adversarial batches carry different labels");
  }
}

}  // namespace

double at_loss(const Classifier& model, const LabeledBatch& adversarial) {
  return cross_entropy(forward_logits(model, adversarial.inputs), adversarial.labels);
}

ModelLoss at_loss_with_grad(const Classifier& model, const LabeledBatch& adversarial,
                            GradientTargets targets) {
  ModelLoss out = method_loss_with_grad(model, MethodSpec::at(), adversarial, adversarial, targets);
  out.clean_input_grad.resize(0, 0);
  return out;
}

double trades_loss(const Classifier& model, const LabeledBatch& clean,
                   const LabeledBatch& adversarial, double lambda) {
  check_pair(clean, adversarial);
  const Logits z_clean = forward_logits(model, clean.inputs);
  const Logits z_adv = forward_logits(model, adversarial.inputs);
  return cross_entropy(z_clean, clean.labels) + lambda * kl_divergence(z_clean, z_adv);
}

ModelLoss trades_loss_with_grad(const Classifier& model, const LabeledBatch& clean,
                                const LabeledBatch& adversarial, double lambda,
                                GradientTargets targets) {
  return method_loss_with_grad(model, {MethodKind::kTrades, lambda}, clean, adversarial, targets);
}

double alp_loss(const Classifier& model, const LabeledBatch& clean,
                const LabeledBatch& adversarial, double lambda) {
  check_pair(clean, adversarial);
  const Logits z_clean = forward_logits(model, clean.inputs);
  const Logits z_adv = forward_logits(model, adversarial.inputs);
  return cross_entropy(z_adv, adversarial.labels) +
         lambda * mean_squared_difference_with_grad(z_clean, z_adv).value;
}

ModelLoss alp_loss_with_grad(const Classifier& model, const LabeledBatch& clean,
                             const LabeledBatch& adversarial, double lambda,
                             GradientTargets targets) {
  return method_loss_with_grad(model, {MethodKind::kAlp, lambda}, clean, adversarial, targets);
}

double method_loss(const Classifier& model, const MethodSpec& method, const LabeledBatch& clean,
                   const LabeledBatch& adversarial) {
  switch (method.kind) {
    case MethodKind::kAt: return at_loss(model, adversarial);
    case MethodKind::kTrades: return trades_loss(model, clean, adversarial, method.lambda);
    case MethodKind::kAlp: return alp_loss(model, clean, adversarial, method.lambda);
  }
  throw std::logic_error("unhandled method kind");
}

ModelLoss method_loss_with_grad(const Classifier& model, const MethodSpec& method,
                                const LabeledBatch& clean, const LabeledBatch& adversarial,
                                GradientTargets targets) {
  check_pair(clean, adversarial);
  const ForwardPass adv_pass = forward(model, adversarial.inputs);
  std::optional<ForwardPass> clean_pass;
  if (needs_clean(method)) clean_pass = forward(model, clean.inputs);
  MethodLogitLoss loss = method_on_logits(method, clean_pass ? &clean_pass->logits : nullptr,
                                          adv_pass.logits, adversarial.labels);
  ModelLoss out;
  out.value = loss.value;
  BackwardResult adv = backward(model, adv_pass, loss.adv_grad, targets);
  out.grad = std::move(adv.param_grad);
  out.adversarial_input_grad = std::move(adv.input_grad);
  const bool want_inputs = targets != GradientTargets::kParameters;
  if (clean_pass) {
    BackwardResult cl = backward(model, *clean_pass, loss.clean_grad, targets);
    if (!out.grad.empty()) add_into(out.grad, cl.param_grad);
    out.clean_input_grad = std::move(cl.input_grad);
  } else if (want_inputs) {
    out.clean_input_grad = Matrix::Zero(clean.inputs.rows(), clean.inputs.cols());
  }
  return out;
}

double collab_term(const Logits& self, const Logits& peer) { return kl_divergence(self, peer); }

PairLoss collab_term_with_grad(const Logits& self, const Logits& peer,
                               PeerGradient peer_gradient) {
  PairLoss out = kl_divergence_with_grad(self, peer);
  if (peer_gradient == PeerGradient::kStopped) out.grad_second.setZero();
  return out;
}

std::vector<CatLoss> cat_objective_terms(std::span<const Participant> participants,
                                         const LabeledBatch& clean,
                                         std::span<const LabeledBatch> adversarial,
                                         const CatOptions& options) {
  const std::size_t n = participants.size();
  if (n == 0) throw std::invalid_argument("cat_objective needs at least one participant");
  if (adversarial.size() != n) {
    throw std::invalid_argument("cat_objective needs one adversarial batch per participant");
  }
  for (const auto& p : participants) {
    if (p.model.classes() != participants[0].model.classes() ||
        p.model.architecture().input != participants[0].model.architecture().input) {
      throw ShapeError("participants must share input shape and class count");
    }
  }

  const double alpha = options.alpha;
  const double peer_weight = n > 1 ? (1.0 - alpha) / static_cast<double>(n - 1) : 0.0;
  std::vector<CatLoss> losses(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Participant& self = participants[i];
    const LabeledBatch& adv_i = adversarial[i];
    check_pair(clean, adv_i);
    CatLoss& out = losses[i];

    const ForwardPass adv_pass = forward(self.model, adv_i.inputs);
    std::optional<ForwardPass> clean_pass;
    if (needs_clean(self.method)) clean_pass = forward(self.model, clean.inputs);
    const MethodLogitLoss method = method_on_logits(
        self.method, clean_pass ? &clean_pass->logits : nullptr, adv_pass.logits, adv_i.labels);
    out.method_value = method.value;

    Matrix adv_grad = alpha * method.adv_grad;
    double collab_sum = 0.0;
    std::vector<std::optional<ForwardPass>> peer_passes(n);
    std::vector<Matrix> peer_logit_grads(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      peer_passes[j] = forward(participants[j].model, adv_i.inputs);
      const PairLoss term =
          collab_term_with_grad(adv_pass.logits, peer_passes[j]->logits, options.peer_gradient);
      collab_sum += term.value;
      adv_grad += peer_weight * term.grad_first;
      peer_logit_grads[j] = peer_weight * term.grad_second;
    }
    out.collab_value = n > 1 ? collab_sum / static_cast<double>(n - 1) : 0.0;
    out.value = alpha * method.value;
    if (n > 1) out.value += (1.0 - alpha) * out.collab_value;

    const GradientTargets targets =
        options.input_gradients ? GradientTargets::kBoth : GradientTargets::kParameters;
    if (options.input_gradients) {
      out.clean_input_grad = Matrix::Zero(clean.inputs.rows(), clean.inputs.cols());
    }
    if (!options.gradients && !options.input_gradients) continue;
    BackwardResult own = backward(self.model, adv_pass, adv_grad, targets);
    out.grads.resize(n);
    out.grads[i] = std::move(own.param_grad);
    out.adversarial_input_grad = std::move(own.input_grad);
    if (clean_pass) {
      BackwardResult cl =
          backward(self.model, *clean_pass, alpha * method.clean_grad, targets);
      add_into(out.grads[i], cl.param_grad);
      if (options.input_gradients) out.clean_input_grad = std::move(cl.input_grad);
    }
    const bool peer_inputs =
        options.input_gradients && options.peer_gradient == PeerGradient::kPropagated;
    if (!options.peer_gradients && !peer_inputs) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      BackwardResult peer = backward(participants[j].model, *peer_passes[j], peer_logit_grads[j],
                                     peer_inputs ? GradientTargets::kBoth
                                                 : GradientTargets::kParameters);
      if (options.peer_gradients) out.grads[j] = std::move(peer.param_grad);
      if (peer_inputs) out.adversarial_input_grad += peer.input_grad;
    }
  }
  return losses;
}

std::vector<double> cat_objective(std::span<const Participant> participants,
                                  const LabeledBatch& batch, double alpha,
                                  const AttackConfig& attack, std::span<Rng> attack_rngs) {
  if (participants.empty()) {
    throw std::invalid_argument("cat_objective needs at least one participant");
  }
  CollabConfig{alpha, CollabMode::kPeers, false}.validate();
  if (attack_rngs.size() != participants.size()) {
    throw std::invalid_argument("cat_objective needs one attack Rng per participant");
  }
  std::vector<LabeledBatch> adversarial;
  adversarial.reserve(participants.size());
  for (std::size_t i = 0; i < participants.size(); ++i) {
    participants[i].method.validate();
    adversarial.push_back(craft_for_method(participants[i].model, participants[i].method, batch,
                                           attack, &attack_rngs[i])
                              .as_batch(batch));
  }
  CatOptions options;
  options.alpha = alpha;
  options.gradients = false;
  std::vector<double> values;
  for (const CatLoss& loss : cat_objective_terms(participants, batch, adversarial, options)) {
    values.push_back(loss.value);
  }
  return values;
}

CatLoss dual_attack_objective(const Classifier& model, const LabeledBatch& adversarial_ce,
                              const LabeledBatch& adversarial_cw, double alpha, bool gradients) {
  check_pair(adversarial_ce, adversarial_cw);
  const ForwardPass ce_pass = forward(model, adversarial_ce.inputs);
  const ForwardPass cw_pass = forward(model, adversarial_cw.inputs);
  const LogitLoss ce_a = cross_entropy_with_grad(ce_pass.logits, adversarial_ce.labels);
  const LogitLoss ce_b = cross_entropy_with_grad(cw_pass.logits, adversarial_cw.labels);
  const PairLoss kl_a = collab_term_with_grad(ce_pass.logits, cw_pass.logits);
  const PairLoss kl_b = collab_term_with_grad(cw_pass.logits, ce_pass.logits);

  CatLoss out;
  out.method_value = 0.5 * (ce_a.value + ce_b.value);
  out.collab_value = 0.5 * (kl_a.value + kl_b.value);
  out.value = alpha * out.method_value + (1.0 - alpha) * out.collab_value;
  if (!gradients) return out;

  const Matrix grad_ce = 0.5 * alpha * ce_a.grad + 0.5 * (1.0 - alpha) * kl_a.grad_first;
  const Matrix grad_cw = 0.5 * alpha * ce_b.grad + 0.5 * (1.0 - alpha) * kl_b.grad_first;
  out.grads.resize(1);
  out.grads[0] = backward(model, ce_pass, grad_ce, GradientTargets::kParameters).param_grad;
  add_into(out.grads[0],
           backward(model, cw_pass, grad_cw, GradientTargets::kParameters).param_grad);
  return out;
}

}  // namespace collabat
