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

#include "collabat/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "collabat/analysis.hpp"

namespace collabat {

TrainConfig TrainConfig::long_schedule() {
  TrainConfig c;
  c.epochs = 200;
  c.lr_drops = {{100, 10.0}, {150, 10.0}};
  return c;
}

AttackConfig TrainConfig::selection_attack() const {
  return AttackConfig::pgd(10, inner_attack.epsilon, inner_attack.step_size, true,
                           ObjectiveKind::kCrossEntropy);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train.epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train.batch_size must be >= 1");
  if (!(base_lr > 0.0)) throw std::invalid_argument("train.base_lr must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("train.momentum must lie in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("train.weight_decay must be >= 0");
  int previous = -1;
  for (const auto& drop : lr_drops) {
    if (drop.epoch <= previous) {
      throw std::invalid_argument("train.lr_drops epochs must be strictly increasing");
    }
    if (drop.epoch < 0 || drop.epoch >= epochs) {
      throw std::invalid_argument("train.lr_drops epochs must lie in [0, epochs)");
    }
    if (!(drop.divisor > 0.0)) throw std::invalid_argument("train.lr_drops divisors must be > 0");
    previous = drop.epoch;
  }
  inner_attack.validate();
  if (inner_attack.is_clean()) {
    throw std::invalid_argument("train.inner_attack must have epsilon > 0");
  }
}

double lr_at(const TrainConfig& config, int epoch) {
  if (epoch < 0 || epoch >= config.epochs) {
    throw std::invalid_argument("epoch " + std::to_string(epoch) + " outside [0, " +
                                std::to_string(config.epochs) + ")");
  }
  double lr = config.base_lr;
  for (const auto& drop : config.lr_drops) {
    if (drop.epoch <= epoch) lr /= drop.divisor;
  }
  return lr;
}

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string TrainingLog::to_csv() const {
  std::ostringstream out;
  out << "epoch,lr";
  for (const auto& name : participants) {
    out << ',' << name << "_loss," << name << "_clean_acc," << name << "_pgd10_acc";
  }
  out << '\n';
  for (const auto& r : records) {
    out << r.epoch << ',' << format_real(r.lr);
    for (std::size_t i = 0; i < participants.size(); ++i) {
      out << ',' << format_real(r.loss[i]) << ',' << format_real(r.clean_acc[i]) << ','
          << format_real(r.pgd10_acc[i]);
    }
    out << '\n';
  }
  return out.str();
}

DivergenceError::DivergenceError(int epoch, int batch, const std::string& participant,
                                 double loss)
    : std::runtime_error("training diverged: participant '" + participant + "' loss " +
                         format_real(loss) + " at epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(batch)),
      epoch_(epoch),
      batch_(batch) {}

Participant make_participant(std::string name, const Architecture& architecture,
                             MethodSpec method, std::uint64_t seed) {
  method.validate();
  Rng rng = Rng::stream(seed, "init", name);
  return Participant{std::move(name), Classifier(architecture, rng), method};
}

TrainingState TrainingState::create(std::vector<Participant> participants, std::uint64_t seed) {
  TrainingState state;
  for (const auto& p : participants) {
    state.velocity.push_back(zeros_like(p.model.params()));
    state.attack_rngs.push_back(Rng::stream(seed, "attack", p.name));
  }
  state.participants = std::move(participants);
  return state;
}

void sgd_update(ParameterSet& params, ParameterSet& velocity, const ParameterSet& grad, double lr,
                double momentum, double weight_decay) {
  if (params.size() != velocity.size() || params.size() != grad.size()) {
    throw ShapeError("sgd_update: parameter, velocity and gradient layouts differ");
  }
  for (std::size_t g = 0; g < params.size(); ++g) {
    velocity[g] = momentum * velocity[g] + (grad[g] + weight_decay * params[g]);
    params[g] -= lr * velocity[g];
  }
}

std::vector<double> train_step(TrainingState& state, const LabeledBatch& batch,
                               const CollabConfig& collab, const TrainConfig& train, int epoch,
                               int batch_index) {
  collab.validate();
  auto& participants = state.participants;
  const std::size_t n = participants.size();
  if (n == 0) throw std::invalid_argument("train_step needs at least one participant");
  const double lr = lr_at(train, epoch);

  std::vector<double> values(n);
  std::vector<ParameterSet> grads(n);

  if (collab.mode == CollabMode::kPeers) {
    std::vector<LabeledBatch> adversarial;
    adversarial.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      adversarial.push_back(craft_for_method(participants[i].model, participants[i].method, batch,
                                             train.inner_attack, &state.attack_rngs[i])
                                .as_batch(batch));
    }
    CatOptions options;
    options.alpha = collab.alpha;
    std::vector<CatLoss> losses = cat_objective_terms(participants, batch, adversarial, options);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = losses[i].value;
      grads[i] = std::move(losses[i].grads[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      AttackConfig ce = train.inner_attack;
      ce.objective = ObjectiveKind::kCrossEntropy;
      AttackConfig cw = train.inner_attack;
      cw.objective = ObjectiveKind::kCwMargin;
      const Classifier& model = participants[i].model;
      const LabeledBatch adv_ce = pgd(model, batch, ce, &state.attack_rngs[i]).as_batch(batch);
      const LabeledBatch adv_cw = pgd(model, batch, cw, &state.attack_rngs[i]).as_batch(batch);
      CatLoss loss = dual_attack_objective(model, adv_ce, adv_cw, collab.alpha);
      values[i] = loss.value;
      grads[i] = std::move(loss.grads[0]);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) {
      throw DivergenceError(epoch, batch_index, participants[i].name, values[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    sgd_update(participants[i].model.params(), state.velocity[i], grads[i], lr, train.momentum,
               train.weight_decay);
  }
  return values;
}

FitResult fit(std::vector<Participant> participants, const DatasetSplit& data,
              const CollabConfig& collab, const TrainConfig& train, const EpochCallback& on_epoch) {
  train.validate();
  collab.validate();
  if (participants.empty()) throw std::invalid_argument("fit needs at least one participant");
  data.train.validate();
  data.test.validate();
  if (data.train.size() == 0 || data.test.size() == 0) {
    throw std::invalid_argument("fit needs non-empty train and test splits");
  }
  for (const auto& p : participants) {
    p.method.validate();
    if (p.model.classes() != data.train.classes ||
        p.model.architecture().input.size() != data.train.shape.size()) {
      throw std::invalid_argument("participant '" + p.name +
                                  "' does not match the dataset's shape or class count");
    }
  }

  const std::size_t n = participants.size();
  TrainingState state = TrainingState::create(std::move(participants), train.seed);
  Rng shuffle_rng = Rng::stream(train.seed, "shuffle");
  const AttackConfig selection = train.selection_attack();

  FitResult result;
  for (const auto& p : state.participants) result.log.participants.push_back(p.name);
  result.best.resize(n);
  std::vector<double> best_acc(n, -1.0);

  std::vector<std::size_t> order(data.train.size());
  const auto batch_size = static_cast<std::size_t>(train.batch_size);
  for (int epoch = 0; epoch < train.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());

    std::vector<double> loss_sum(n, 0.0);
    int batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + batch_size);
      const LabeledBatch batch = data.train.select(
          {order.begin() + static_cast<std::ptrdiff_t>(begin),
           order.begin() + static_cast<std::ptrdiff_t>(end)});
      const auto values = train_step(state, batch, collab, train, epoch, batch_index);
      for (std::size_t i = 0; i < n; ++i) {
        loss_sum[i] += values[i] * static_cast<double>(end - begin);
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.lr = lr_at(train, epoch);
    for (std::size_t i = 0; i < n; ++i) {
      const Participant& p = state.participants[i];
      record.loss.push_back(loss_sum[i] / static_cast<double>(order.size()));
      record.clean_acc.push_back(
          robust_accuracy(p.model, data.test, AttackConfig::clean(), nullptr).accuracy);
      Rng eval_rng = Rng::stream(train.seed, "eval", p.name, static_cast<std::uint64_t>(epoch));
      const double robust = robust_accuracy(p.model, data.test, selection, &eval_rng).accuracy;
      record.pgd10_acc.push_back(robust);
      if (robust > best_acc[i]) {
        best_acc[i] = robust;
        result.best[i] = Checkpoint::capture(p.model, epoch, p.name, p.method);
      }
    }
    result.log.records.push_back(record);
    if (on_epoch) on_epoch(record);
  }

  for (const auto& p : state.participants) {
    result.last.push_back(Checkpoint::capture(p.model, train.epochs - 1, p.name, p.method));
  }
  return result;
}

int best_epoch(const TrainingLog& log, std::size_t participant) {
  if (log.records.empty()) throw std::invalid_argument("training log is empty");
  if (participant >= log.participants.size()) {
    throw std::invalid_argument("participant index out of range");
  }
  const EpochRecord* best = &log.records.front();
  for (const auto& r : log.records) {
    if (r.pgd10_acc[participant] > best->pgd10_acc[participant]) best = &r;
  }
  return best->epoch;
}

Checkpoint select_best_checkpoint(const TrainingLog& log, std::size_t participant,
                                  std::span<const Checkpoint> checkpoints) {
  const int epoch = best_epoch(log, participant);
  for (const auto& c : checkpoints) {
    if (c.epoch == epoch) return c;
  }
  throw std::invalid_argument("no checkpoint recorded for epoch " + std::to_string(epoch));
}

}  // namespace collabat
