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
#include <vector>

#include "collabat/attacks.hpp"
#include "collabat/classifier.hpp"
#include "collabat/losses.hpp"

namespace collabat {

enum class MethodKind { kAt, kTrades, kAlp };

std::string to_string(MethodKind kind);
/// Accepts "AT", "TRADES", "ALP".
MethodKind parse_method(std::string_view text);

inline constexpr double kDefaultTradesLambda = 6.0;
inline constexpr double kDefaultAlpLambda = 0.5;
inline constexpr double kDefaultAlpha = 0.05;

/// Base adversarial training objective of one participant. `lambda` is the
/// TRADES KL weight or the ALP logit-pairing weight; AT ignores it.
struct MethodSpec {
  MethodKind kind = MethodKind::kAt;
  double lambda = 0.0;

  static MethodSpec at() { return {MethodKind::kAt, 0.0}; }
  static MethodSpec trades(double lambda = kDefaultTradesLambda) {
    return {MethodKind::kTrades, lambda};
  }
  static MethodSpec alp(double lambda = kDefaultAlpLambda) { return {MethodKind::kAlp, lambda}; }

  void validate() const;
  bool operator==(const MethodSpec&) const = default;
};

/// How participants exchange knowledge.
///   kPeers:       each participant is guided by its peers on its own
///                 adversarial batch.
///   kDualAttack:  each participant is attacked twice (PGD-CE and PGD-CW) and
///                 its predictions on the two batches guide each other.
enum class CollabMode { kPeers, kDualAttack };

std::string to_string(CollabMode mode);
CollabMode parse_collab_mode(std::string_view text);

struct CollabConfig {
  double alpha = kDefaultAlpha;
  CollabMode mode = CollabMode::kPeers;
  /// Only for experiments on the degenerate alpha = 0 regime; never set by
  /// config parsing.
  bool allow_zero_alpha = false;

  /// Requires alpha in (0, 1]; alpha = 0 trains on peer agreement alone and
  /// collapses, so it is rejected unless allow_zero_alpha is set.
  void validate() const;
};

struct Participant {
  std::string name;
  Classifier model;
  MethodSpec method;
};

/// Scalar loss plus gradient w.r.t. one model's parameters and, on request,
/// w.r.t. the clean and adversarial inputs.
struct ModelLoss {
  double value = 0.0;
  ParameterSet grad;
  Matrix clean_input_grad;
  Matrix adversarial_input_grad;
};

double at_loss(const Classifier& model, const LabeledBatch& adversarial);
ModelLoss at_loss_with_grad(const Classifier& model, const LabeledBatch& adversarial,
                            GradientTargets targets = GradientTargets::kParameters);

/// CE(clean) + lambda * KL(clean || adversarial); gradients flow through both.
double trades_loss(const Classifier& model, const LabeledBatch& clean,
                   const LabeledBatch& adversarial, double lambda);
ModelLoss trades_loss_with_grad(const Classifier& model, const LabeledBatch& clean,
                                const LabeledBatch& adversarial, double lambda,
                                GradientTargets targets = GradientTargets::kParameters);

/// CE(adversarial) + lambda * mean((clean logits - adversarial logits)^2).
double alp_loss(const Classifier& model, const LabeledBatch& clean,
                const LabeledBatch& adversarial, double lambda);
ModelLoss alp_loss_with_grad(const Classifier& model, const LabeledBatch& clean,
                             const LabeledBatch& adversarial, double lambda,
                             GradientTargets targets = GradientTargets::kParameters);

double method_loss(const Classifier& model, const MethodSpec& method, const LabeledBatch& clean,
                   const LabeledBatch& adversarial);
ModelLoss method_loss_with_grad(const Classifier& model, const MethodSpec& method,
                                const LabeledBatch& clean, const LabeledBatch& adversarial,
                                GradientTargets targets = GradientTargets::kParameters);

enum class PeerGradient { kStopped, kPropagated };

/// KL(self || peer). With kStopped the peer logits are constants and
/// grad_second is exactly zero.
double collab_term(const Logits& self, const Logits& peer);
PairLoss collab_term_with_grad(const Logits& self, const Logits& peer,
                               PeerGradient peer_gradient = PeerGradient::kStopped);

/// Per-participant collaborative loss:
///   loss_i = alpha * L_i + (1 - alpha) * mean_{j != i} KL(f_i(A_i) || sg(f_j(A_i)))
/// where A_i is participant i's own adversarial batch.
struct CatLoss {
  double value = 0.0;
  double method_value = 0.0;
  double collab_value = 0.0;
  /// grads[j] = dloss_i / d(parameters of participant j). Entries for j != i
  /// are only filled when CatOptions::peer_gradients is set.
  std::vector<ParameterSet> grads;
  /// dloss_i / d(clean inputs) and d(A_i), filled when
  /// CatOptions::input_gradients is set. Peer logits contribute to the
  /// adversarial input gradient only with PeerGradient::kPropagated.
  Matrix clean_input_grad;
  Matrix adversarial_input_grad;
};

struct CatOptions {
  double alpha = kDefaultAlpha;
  bool gradients = true;
  /// Also backpropagate into peers through the (gated) peer logits.
  bool peer_gradients = false;
  PeerGradient peer_gradient = PeerGradient::kStopped;
  bool input_gradients = false;
};

/// Losses for pre-crafted adversarial batches, adversarial[i] belonging to
/// participant i. Applies no alpha validation; callers own that.
std::vector<CatLoss> cat_objective_terms(std::span<const Participant> participants,
                                         const LabeledBatch& clean,
                                         std::span<const LabeledBatch> adversarial,
                                         const CatOptions& options);

/// Crafts each participant's adversarial batch with `attack_rngs[i]` and
/// returns the per-participant loss values. Rejects alpha outside (0, 1] and
/// an empty participant list.
std::vector<double> cat_objective(std::span<const Participant> participants,
                                  const LabeledBatch& batch, double alpha,
                                  const AttackConfig& attack, std::span<Rng> attack_rngs);

/// One model, two adversarial batches (PGD-CE and PGD-CW):
///   alpha * (CE(A_ce) + CE(A_cw)) / 2
///   + (1 - alpha) * (KL(f(A_ce) || sg(f(A_cw))) + KL(f(A_cw) || sg(f(A_ce)))) / 2
CatLoss dual_attack_objective(const Classifier& model, const LabeledBatch& adversarial_ce,
                              const LabeledBatch& adversarial_cw, double alpha,
                              bool gradients = true);

}  // namespace collabat
