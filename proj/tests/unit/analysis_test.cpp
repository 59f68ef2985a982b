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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "collabat/analysis.hpp"
#include "collabat/reports.hpp"
#include "oracles.hpp"

namespace collabat {
namespace {

constexpr double kEps = 8.0 / 255.0;

Classifier random_mlp(int d, int classes, std::uint64_t seed) {
  Rng rng(seed);
  std::mt19937_64 gen(seed);
  return testing::with_random_biases(Classifier(Architecture::mlp(d, {8}, classes), rng), gen, 0.5);
}

Classifier constant_predictor(int d, int classes, int winner) {
  Classifier model(Architecture::mlp(d, {}, classes));
  ParameterSet p = model.params();
  p[1].setZero();
  p[1](winner) = 1.0;
  model.set_params(p);
  return model;
}

double direct_accuracy(const Classifier& model, const LabeledBatch& data) {
  const auto pred = predict(model, data.inputs);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) ok += pred[i] == data.labels[i] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(pred.size());
}

TEST(RobustAccuracy, CleanEqualsDirectAccuracyBitwise) {
  std::mt19937_64 gen(1);
  const auto model = random_mlp(3, 4, 1);
  const auto data = testing::random_batch(600, {3, 1, 1}, 4, gen);
  const auto entry = robust_accuracy(model, data, AttackConfig::clean(), nullptr, "clean");
  EXPECT_EQ(entry.accuracy, direct_accuracy(model, data));
  EXPECT_EQ(entry.count, 600u);
  EXPECT_EQ(entry.attack_name, "clean");
}

TEST(RobustAccuracy, ConstantModelScoresClassZeroFrequency) {
  std::mt19937_64 gen(2);
  Classifier model(Architecture::mlp(3, {}, 3));
  const auto data = testing::random_batch(300, {3, 1, 1}, 3, gen);
  std::size_t zeros = 0;
  for (int y : data.labels) zeros += y == 0 ? 1 : 0;
  Rng rng(2);
  const auto entry = robust_accuracy(model, data, AttackConfig::pgd(5), &rng);
  EXPECT_EQ(entry.correct, zeros);
}

// A binary linear model whose every margin exceeds eps * ||w||_1 cannot be
// flipped by any L-infinity perturbation of radius eps.
TEST(RobustAccuracy, LinearMarginOracleGivesPerfectRobustness) {
  std::mt19937_64 gen(3);
  const int d = 4;
  Matrix w = Matrix::Zero(2, d);
  w.row(1) = testing::random_logits(1, d, gen, 1.0);
  Vector bias(2);
  bias << 0.0, -0.5 * w.row(1).sum();
  const Classifier model = testing::linear_model(w, bias);
  const double l1 = w.row(1).cwiseAbs().sum();

  LabeledBatch data;
  data.classes = 2;
  data.shape = {d, 1, 1};
  std::vector<Eigen::Index> keep;
  const Matrix pool = testing::random_unit_box(2000, d, gen);
  std::vector<int> labels;
  for (Eigen::Index r = 0; r < pool.rows(); ++r) {
    const double z = pool.row(r).dot(w.row(1)) + bias(1);
    if (std::abs(z) > kEps * l1 * 1.01) {
      keep.push_back(r);
      labels.push_back(z > 0 ? 1 : 0);
    }
  }
  ASSERT_GT(keep.size(), 100u);
  data.inputs = pool(keep, Eigen::all);
  data.labels = labels;
  Rng rng(3);
  for (const auto& attack : {AttackConfig::fgsm(kEps), AttackConfig::pgd(20),
                             AttackConfig::pgd(20, kEps, kEps / 4, true, ObjectiveKind::kCwMargin)}) {
    EXPECT_EQ(robust_accuracy(model, data, attack, &rng).accuracy, 1.0);
  }
}

TEST(RobustAccuracy, MonotoneInEpsilonOnLinearModels) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix w = Matrix::Zero(2, 5);
    w.row(1) = testing::random_logits(1, 5, gen, 2.0);
    Vector bias(2);
    bias << 0.0, -0.5 * w.row(1).sum();
    const Classifier model = testing::linear_model(w, bias);
    const auto data = testing::random_batch(400, {5, 1, 1}, 2, gen, 0.0, 1.0);
    double previous = 1.0;
    for (double eps = 0.0; eps <= 0.3; eps += 0.02) {
      const AttackConfig attack = eps == 0.0 ? AttackConfig::clean() : AttackConfig::fgsm(eps);
      const double acc = robust_accuracy(model, data, attack, nullptr).accuracy;
      EXPECT_LE(acc, previous) << "eps " << eps;
      previous = acc;
    }
  }
}

TEST(RobustAccuracy, EmptyDatasetRejected) {
  LabeledBatch empty;
  empty.classes = 2;
  empty.shape = {2, 1, 1};
  empty.inputs = Matrix(0, 2);
  EXPECT_THROW(robust_accuracy(random_mlp(2, 2, 1), empty, AttackConfig::clean(), nullptr),
               std::invalid_argument);
}

TEST(RobustAccuracy, CountRatioInvariant) {
  std::mt19937_64 gen(5);
  const auto data = testing::random_batch(300, {3, 1, 1}, 3, gen);
  Rng rng(5);
  const auto e = robust_accuracy(random_mlp(3, 3, 5), data, AttackConfig::pgd(3), &rng);
  EXPECT_EQ(e.accuracy, static_cast<double>(e.correct) / static_cast<double>(e.count));
  EXPECT_GE(e.accuracy, 0.0);
  EXPECT_LE(e.accuracy, 1.0);
}

TEST(TransferRobustness, SelfTransferEqualsWhiteBox) {
  std::mt19937_64 gen(6);
  const auto model = random_mlp(3, 3, 6);
  const auto data = testing::random_batch(300, {3, 1, 1}, 3, gen);
  Rng a(9), b(9);
  EXPECT_EQ(transfer_robustness(model, model, data, AttackConfig::pgd(5), &a).correct,
            robust_accuracy(model, data, AttackConfig::pgd(5), &b).correct);
}

TEST(TransferRobustness, CleanAndZeroGradientSurrogateGiveTargetCleanAccuracy) {
  std::mt19937_64 gen(7);
  const auto target = random_mlp(3, 3, 7);
  const auto data = testing::random_batch(300, {3, 1, 1}, 3, gen);
  const double clean = direct_accuracy(target, data);
  EXPECT_EQ(transfer_robustness(random_mlp(3, 3, 8), target, data, AttackConfig::clean(), nullptr)
                .accuracy,
            clean);
  Classifier flat(Architecture::mlp(3, {}, 3));
  EXPECT_EQ(transfer_robustness(flat, target, data, AttackConfig::pgd(10, kEps, kEps / 4, false),
                                nullptr)
                .accuracy,
            clean);
}

TEST(TransferRobustness, ShapeMismatchRejected) {
  std::mt19937_64 gen(8);
  const auto data = testing::random_batch(10, {3, 1, 1}, 3, gen);
  EXPECT_THROW(transfer_robustness(random_mlp(3, 2, 1), random_mlp(3, 3, 1), data,
                                   AttackConfig::clean(), nullptr),
               std::invalid_argument);
  EXPECT_THROW(transfer_robustness(random_mlp(4, 3, 1), random_mlp(3, 3, 1), data,
                                   AttackConfig::clean(), nullptr),
               std::invalid_argument);
}

TEST(CrossConfusion, IdenticalModelsAreDiagonal) {
  std::mt19937_64 gen(9);
  const auto model = random_mlp(3, 4, 9);
  const auto data = testing::random_batch(500, {3, 1, 1}, 4, gen);
  Rng rng(9);
  const auto c = cross_confusion(model, model, data, AttackConfig::pgd(5), Crafter::kFirst, &rng);
  EXPECT_EQ(c.total(), 500);
  EXPECT_EQ(c.trace(), 500);
  Rng rng2(9);
  const auto d = prediction_discrepancy(model, model, data, AttackConfig::pgd(5), Crafter::kFirst, &rng2);
  EXPECT_EQ(d.intersection, 1.0);
  EXPECT_EQ(d.discrepancy, 0.0);
}

TEST(CrossConfusion, DisjointConstantPredictors) {
  std::mt19937_64 gen(10);
  const auto data = testing::random_batch(77, {3, 1, 1}, 3, gen);
  const auto a = constant_predictor(3, 3, 0);
  const auto b = constant_predictor(3, 3, 1);
  const auto c = cross_confusion(a, b, data, AttackConfig::clean(), Crafter::kFirst, nullptr);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(c.counts[i][j], i == 0 && j == 1 ? 77 : 0);
  }
  EXPECT_EQ(prediction_discrepancy(a, b, data, AttackConfig::clean(), Crafter::kFirst, nullptr)
                .discrepancy,
            1.0);
}

TEST(CrossConfusion, MarginalsMatchCountingOracle) {
  std::mt19937_64 gen(11);
  const auto a = random_mlp(3, 4, 11);
  const auto b = random_mlp(3, 4, 12);
  const auto data = testing::random_batch(700, {3, 1, 1}, 4, gen);
  Rng rng(1), same(1);
  const auto pa = analyze_pair(a, b, data, AttackConfig::pgd(5), Crafter::kSecond, &rng);
  const Matrix shared = craft_inputs(b, data, AttackConfig::pgd(5), &same);
  const auto ya = predict(a, shared);
  const auto yb = predict(b, shared);
  std::vector<long> hist_a(4, 0), hist_b(4, 0);
  for (std::size_t i = 0; i < ya.size(); ++i) {
    ++hist_a[static_cast<std::size_t>(ya[i])];
    ++hist_b[static_cast<std::size_t>(yb[i])];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    long row = 0, col = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      row += pa.confusion.counts[i][j];
      col += pa.confusion.counts[j][i];
    }
    EXPECT_EQ(row, hist_a[i]);
    EXPECT_EQ(col, hist_b[i]);
  }
  EXPECT_EQ(pa.first_predictions, ya);
  EXPECT_EQ(pa.second_predictions, yb);
}

TEST(Discrepancy, TraceIdentitySymmetryAndTranspose) {
  std::mt19937_64 gen(12);
  const auto a = random_mlp(3, 3, 13);
  const auto b = random_mlp(3, 3, 14);
  const auto data = testing::random_batch(513, {3, 1, 1}, 3, gen);
  for (const auto& attack : {AttackConfig::clean(), AttackConfig::pgd(5)}) {
    Rng r1(4), r2(4);
    const auto ab = analyze_pair(a, b, data, attack, Crafter::kFirst, &r1);
    const auto ba = analyze_pair(b, a, data, attack, Crafter::kSecond, &r2);
    const auto n = static_cast<double>(data.size());
    EXPECT_EQ(ab.discrepancy.discrepancy, 1.0 - static_cast<double>(ab.confusion.trace()) / n);
    EXPECT_EQ(ab.discrepancy.intersection + ab.discrepancy.discrepancy, 1.0);
    EXPECT_EQ(ab.discrepancy.discrepancy, ba.discrepancy.discrepancy);
    EXPECT_EQ(ba.confusion.counts, ab.confusion.transposed().counts);
    EXPECT_EQ(ab.confusion.total(), static_cast<long>(data.size()));
    const auto from_conf = discrepancy_from_confusion(ab.confusion);
    EXPECT_EQ(from_conf.discrepancy, ab.discrepancy.discrepancy);
  }
}

TEST(Discrepancy, SumIsExactlyOneForManyCounts) {
  for (std::size_t n = 1; n < 300; ++n) {
    for (std::size_t k = 0; k <= n; k += 7) {
      const auto s = discrepancy_from_counts(k, n);
      EXPECT_EQ(s.intersection + s.discrepancy, 1.0) << k << "/" << n;
    }
  }
  EXPECT_THROW(discrepancy_from_counts(0, 0), std::invalid_argument);
}

TEST(PairAnalysis, OnlyCorrectCountsMatchLoop) {
  std::mt19937_64 gen(13);
  const auto a = random_mlp(3, 3, 15);
  const auto b = random_mlp(3, 3, 16);
  const auto data = testing::random_batch(400, {3, 1, 1}, 3, gen);
  const auto p = analyze_pair(a, b, data, AttackConfig::clean(), Crafter::kFirst, nullptr);
  std::size_t oa = 0, ob = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool ca = p.first_predictions[i] == data.labels[i];
    const bool cb = p.second_predictions[i] == data.labels[i];
    oa += ca && !cb;
    ob += cb && !ca;
  }
  EXPECT_EQ(p.only_first_correct, oa);
  EXPECT_EQ(p.only_second_correct, ob);
  EXPECT_EQ(p.confusion.crafted_by, "none");
}

TEST(ConfusionReport, ZeroDiagonalIsDisplayOnly) {
  ConfusionMatrix c;
  c.counts = {{5, 1}, {2, 7}};
  c.row_model = "A";
  c.column_model = "B";
  c.attack_name = "clean";
  c.attack = AttackConfig::clean();
  c.crafted_by = "none";
  EXPECT_EQ(c.to_csv(), "5,1\n2,7\n");
  EXPECT_EQ(c.to_csv(true), "0,1\n2,0\n");
  const auto j = nlohmann::json::parse(confusion_to_json(c, true));
  EXPECT_EQ(j["counts"][0][0], 5);
  EXPECT_EQ(j["counts"][1][1], 7);
  EXPECT_EQ(j["diagonal_zeroed_in_csv"], true);
  EXPECT_EQ(j["total"], 15);
}

TEST(Reports, JsonAndCsvCarryEveryEntry) {
  std::mt19937_64 gen(14);
  const auto data = testing::random_batch(50, {3, 1, 1}, 3, gen);
  RobustnessReport report;
  report.entries.push_back(robust_accuracy(random_mlp(3, 3, 1), data, AttackConfig::clean(), nullptr, "clean"));
  report.entries.back().model = "f@3";
  const auto j = nlohmann::json::parse(report_to_json(report));
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["model"], "f@3");
  EXPECT_EQ(j["entries"][0]["count"], 50);
  const std::string csv = report_to_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "model,surrogate,attack,epsilon,step_size,iterations,random_start,objective,correct,"
            "count,accuracy");
}

TEST(CraftInputs, ChunkingCoversEveryRowAndIsSeedDeterministic) {
  std::mt19937_64 gen(15);
  const auto model = random_mlp(3, 3, 17);
  const auto data = testing::random_batch(kEvalBatchSize * 2 + 17, {3, 1, 1}, 3, gen);
  Rng a(3), b(3);
  const Matrix x = craft_inputs(model, data, AttackConfig::pgd(4), &a);
  const Matrix y = craft_inputs(model, data, AttackConfig::pgd(4), &b);
  EXPECT_TRUE(testing::bitwise_equal(x, y));
  EXPECT_LE(linf_distance(x, data.inputs), kEps + 1e-9);
  EXPECT_GT(linf_distance(x.bottomRows(17), data.inputs.bottomRows(17)), 0.0);
}

}  // namespace
}  // namespace collabat
