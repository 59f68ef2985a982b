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

#include "collabat/analysis.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace collabat {
namespace {

void check_compatible(const Classifier& a, const Classifier& b) {
  if (a.classes() != b.classes()) {
    throw std::invalid_argument("models disagree on class count (" +
                                std::to_string(a.classes()) + " vs " +
                                std::to_string(b.classes()) + ")");
  }
  if (a.architecture().input != b.architecture().input) {
    throw std::invalid_argument("models disagree on input shape");
  }
}

void check_data(const Classifier& model, const LabeledBatch& data) {
  if (data.size() == 0) throw std::invalid_argument("evaluation dataset is empty");
  if (data.classes != model.classes()) {
    throw std::invalid_argument("dataset has " + std::to_string(data.classes) +
                                " classes but the model has " +
                                std::to_string(model.classes()));
  }
}

std::vector<int> predict_chunked(const Classifier& model, const Matrix& inputs) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(inputs.rows()));
  for (Eigen::Index begin = 0; begin < inputs.rows();
       begin += static_cast<Eigen::Index>(kEvalBatchSize)) {
    const Eigen::Index n =
        std::min<Eigen::Index>(static_cast<Eigen::Index>(kEvalBatchSize), inputs.rows() - begin);
    const auto chunk = predict(model, inputs.middleRows(begin, n));
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  return out;
}

ReportEntry score(const Classifier& model, const Matrix& inputs, const LabeledBatch& data,
                  const AttackConfig& attack, std::string attack_name) {
  const std::vector<int> predictions = predict_chunked(model, inputs);
  ReportEntry entry;
  entry.attack_name = std::move(attack_name);
  entry.attack = attack;
  entry.count = data.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == data.labels[i]) ++entry.correct;
  }
  entry.accuracy = static_cast<double>(entry.correct) / static_cast<double>(entry.count);
  return entry;
}

}  // namespace

Matrix craft_inputs(const Classifier& model, const LabeledBatch& data, const AttackConfig& attack,
                    Rng* rng) {
  attack.validate();
  if (attack.is_clean()) return data.inputs;
  Matrix out(data.inputs.rows(), data.inputs.cols());
  for (std::size_t begin = 0; begin < data.size(); begin += kEvalBatchSize) {
    const std::size_t end = std::min(data.size(), begin + kEvalBatchSize);
    const LabeledBatch chunk = data.slice(begin, end);
    AdversarialBatch adv;
    if (attack.objective == ObjectiveKind::kKl) {
      const Logits reference = forward_logits(model, chunk.inputs);
      adv = pgd(model, chunk, attack, rng, &reference);
    } else {
      adv = pgd(model, chunk, attack, rng);
    }
    out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
        adv.perturbed;
  }
  return out;
}

ReportEntry robust_accuracy(const Classifier& model, const LabeledBatch& data,
                            const AttackConfig& attack, Rng* rng, std::string attack_name) {
  check_data(model, data);
  return score(model, craft_inputs(model, data, attack, rng), data, attack,
               std::move(attack_name));
}

ReportEntry transfer_robustness(const Classifier& surrogate, const Classifier& target,
                                const LabeledBatch& data, const AttackConfig& attack, Rng* rng,
                                std::string attack_name) {
  check_compatible(surrogate, target);
  check_data(target, data);
  return score(target, craft_inputs(surrogate, data, attack, rng), data, attack,
               std::move(attack_name));
}

std::string to_string(Crafter crafter) { return crafter == Crafter::kFirst ? "first" : "second"; }

long ConfusionMatrix::total() const {
  long n = 0;
  for (const auto& row : counts) {
    for (long v : row) n += v;
  }
  return n;
}

long ConfusionMatrix::trace() const {
  long n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix out = *this;
  std::swap(out.row_model, out.column_model);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts.size(); ++j) out.counts[i][j] = counts[j][i];
  }
  return out;
}

std::string ConfusionMatrix::to_csv(bool zero_diagonal) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      if (j > 0) out << ',';
      out << ((zero_diagonal && i == j) ? 0 : counts[i][j]);
    }
    out << '\n';
  }
  return out.str();
}

DiscrepancyScore discrepancy_from_counts(std::size_t agreements, std::size_t count) {
  if (count == 0) throw std::invalid_argument("discrepancy of an empty sample");
  DiscrepancyScore s;
  s.agreements = agreements;
  s.count = count;
  s.intersection = static_cast<double>(agreements) / static_cast<double>(count);
  s.discrepancy = 1.0 - s.intersection;
  return s;
}

DiscrepancyScore discrepancy_from_confusion(const ConfusionMatrix& confusion) {
  return discrepancy_from_counts(static_cast<std::size_t>(confusion.trace()),
                                 static_cast<std::size_t>(confusion.total()));
}

PairAnalysis analyze_pair(const Classifier& first, const Classifier& second,
                          const LabeledBatch& data, const AttackConfig& attack, Crafter crafter,
                          Rng* rng, const std::string& first_name,
                          const std::string& second_name, const std::string& attack_name) {
  check_compatible(first, second);
  check_data(first, data);
  const Classifier& source = crafter == Crafter::kFirst ? first : second;
  const Matrix inputs = craft_inputs(source, data, attack, rng);

  PairAnalysis out;
  out.first_predictions = predict_chunked(first, inputs);
  out.second_predictions = predict_chunked(second, inputs);

  const auto classes = static_cast<std::size_t>(first.classes());
  out.confusion.counts.assign(classes, std::vector<long>(classes, 0));
  out.confusion.row_model = first_name;
  out.confusion.column_model = second_name;
  out.confusion.attack_name = attack_name;
  out.confusion.attack = attack;
  out.confusion.crafted_by = attack.is_clean() ? "none" : (crafter == Crafter::kFirst
                                                               ? first_name
                                                               : second_name);
  std::size_t agreements = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int a = out.first_predictions[i];
    const int b = out.second_predictions[i];
    ++out.confusion.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    if (a == b) ++agreements;
    const bool a_ok = a == data.labels[i];
    const bool b_ok = b == data.labels[i];
    if (a_ok && !b_ok) ++out.only_first_correct;
    if (b_ok && !a_ok) ++out.only_second_correct;
  }
  out.discrepancy = discrepancy_from_counts(agreements, data.size());
  return out;
}

ConfusionMatrix cross_confusion(const Classifier& first, const Classifier& second,
                                const LabeledBatch& data, const AttackConfig& attack,
                                Crafter crafter, Rng* rng) {
  return analyze_pair(first, second, data, attack, crafter, rng).confusion;
}

DiscrepancyScore prediction_discrepancy(const Classifier& first, const Classifier& second,
                                        const LabeledBatch& data, const AttackConfig& attack,
                                        Crafter crafter, Rng* rng) {
  return analyze_pair(first, second, data, attack, crafter, rng).discrepancy;
}

}  // namespace collabat
