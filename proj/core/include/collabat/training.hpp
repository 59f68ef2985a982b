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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "collabat/attacks.hpp"
#include "collabat/checkpoint.hpp"
#include "collabat/objectives.hpp"
#include "collabat/rng.hpp"

namespace collabat {

struct LrDrop {
  int epoch = 0;
  double divisor = 10.0;
  bool operator==(const LrDrop&) const = default;
};

struct TrainConfig {
  int epochs = 50;
  int batch_size = 128;
  double base_lr = 0.1;
  std::vector<LrDrop> lr_drops = {{25, 10.0}, {40, 10.0}};
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::uint64_t seed = 0;
  AttackConfig inner_attack = AttackConfig::pgd(10);

  /// 200 epochs, drops at 100 and 150, otherwise the desk defaults.
  static TrainConfig long_schedule();

  /// PGD-10 cross-entropy with the inner attack's radius and step, random start.
  /// Used for per-epoch robust accuracy and best-checkpoint selection.
  [[nodiscard]] AttackConfig selection_attack() const;

  void validate() const;
};

/// Learning rate for `epoch` with every drop at or before it applied.
double lr_at(const TrainConfig& config, int epoch);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  std::vector<double> loss;
  std::vector<double> clean_acc;
  std::vector<double> pgd10_acc;
  bool operator==(const EpochRecord&) const = default;
};

struct TrainingLog {
  std::vector<std::string> participants;
  std::vector<EpochRecord> records;

  /// Columns: epoch, lr, then <name>_loss, <name>_clean_acc, <name>_pgd10_acc
  /// for each participant. Reals are printed with 17 significant digits.
  [[nodiscard]] std::string to_csv() const;
  bool operator==(const TrainingLog&) const = default;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, int batch, const std::string& participant, double loss);
  int epoch() const { return epoch_; }
  int batch() const { return batch_; }

 private:
  int epoch_;
  int batch_;
};

Participant make_participant(std::string name, const Architecture& architecture,
                             MethodSpec method, std::uint64_t seed);

/// Mutable state carried across steps: the models, their momentum buffers and
/// their attack random streams.
struct TrainingState {
  std::vector<Participant> participants;
  std::vector<ParameterSet> velocity;
  std::vector<Rng> attack_rngs;

  static TrainingState create(std::vector<Participant> participants, std::uint64_t seed);
};

/// p <- p - lr * v with v <- momentum * v + (grad + weight_decay * p).
void sgd_update(ParameterSet& params, ParameterSet& velocity, const ParameterSet& grad, double lr,
                double momentum, double weight_decay);

/// One synchronous collaborative step. Every participant crafts its own
/// adversarial batch, all losses are computed from pre-update parameters,
/// then every participant is updated. Returns per-participant loss values.
/// Throws DivergenceError on a non-finite loss.
std::vector<double> train_step(TrainingState& state, const LabeledBatch& batch,
                               const CollabConfig& collab, const TrainConfig& train, int epoch,
                               int batch_index = 0);

struct FitResult {
  TrainingLog log;
  std::vector<Checkpoint> best;
  std::vector<Checkpoint> last;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Full training run. After every epoch each participant's clean and PGD-10
/// test accuracy are logged; "best" keeps the highest PGD-10 epoch (earliest
/// on ties), "last" the final epoch.
FitResult fit(std::vector<Participant> participants, const DatasetSplit& data,
              const CollabConfig& collab, const TrainConfig& train,
              const EpochCallback& on_epoch = {});

/// Epoch of maximum PGD-10 accuracy for one participant; earliest on ties.
int best_epoch(const TrainingLog& log, std::size_t participant);

/// Picks the checkpoint whose epoch is best_epoch(log, participant).
/// Throws std::invalid_argument on an empty log or a missing epoch.
Checkpoint select_best_checkpoint(const TrainingLog& log, std::size_t participant,
                                  std::span<const Checkpoint> checkpoints);

}  // namespace collabat
