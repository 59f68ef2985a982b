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

#include "collabat/attacks.hpp"
#include "collabat/objectives.hpp"
#include "oracles.hpp"

namespace collabat {
namespace {

constexpr double kEps = 8.0 / 255.0;

void expect_feasible(const AdversarialBatch& adv, double epsilon) {
  EXPECT_LE(linf_distance(adv.perturbed, adv.originals), epsilon + 1e-9);
  EXPECT_GE(adv.perturbed.minCoeff(), 0.0);
  EXPECT_LE(adv.perturbed.maxCoeff(), 1.0);
}

Classifier constant_logit_model(int d, int classes) {
  Classifier model(Architecture::mlp(d, {}, classes));
  ParameterSet p = model.params();
  for (int c = 0; c < classes; ++c) p[1](c) = 0.25 * c;
  model.set_params(p);
  return model;
}

TEST(AttackConfig, Validation) {
  EXPECT_NO_THROW(AttackConfig{}.validate());
  EXPECT_NO_THROW(AttackConfig::clean().validate());
  EXPECT_THROW(AttackConfig::pgd(10, 0.1, 0.2).validate(), std::invalid_argument);
  EXPECT_THROW(AttackConfig::pgd(0, 0.1, 0.01).validate(), std::invalid_argument);
  EXPECT_THROW(AttackConfig::pgd(1, 1.5, 0.1).validate(), std::invalid_argument);
  EXPECT_THROW(AttackConfig::pgd(1, -0.1, 0.1).validate(), std::invalid_argument);
  EXPECT_EQ(AttackConfig{}.epsilon, 8.0 / 255.0);
  EXPECT_EQ(AttackConfig{}.step_size, 2.0 / 255.0);
}

TEST(ProjectFeasible, InteriorPointUnchanged) {
  std::mt19937_64 gen(1);
  const Matrix x = testing::random_unit_box(4, 5, gen, 0.1, 0.9);
  EXPECT_TRUE(testing::bitwise_equal(project_feasible(x, x, kEps), x));
}

TEST(ProjectFeasible, OvershootClampsToBoxEdge) {
  Matrix x = Matrix::Constant(1, 3, 0.5);
  Matrix cand = x;
  cand(0, 1) += 2 * kEps;
  const Matrix out = project_feasible(cand, x, kEps);
  EXPECT_EQ(out(0, 1), 0.5 + kEps);
  EXPECT_EQ(out(0, 0), 0.5);
}

TEST(ProjectFeasible, MatchesScalarClampOracleAndIsIdempotent) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = std::uniform_real_distribution<double>(1e-3, 0.5)(gen);
    const Matrix x = testing::random_unit_box(3, 7, gen);
    const Matrix cand = testing::random_unit_box(3, 7, gen, -0.5, 1.5);
    const Matrix out = project_feasible(cand, x, eps);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      EXPECT_EQ(out.data()[i], testing::scalar_clamp(cand.data()[i], x.data()[i], eps));
    }
    EXPECT_LE(linf_distance(out, x), eps + 1e-9);
    EXPECT_GE(out.minCoeff(), 0.0);
    EXPECT_LE(out.maxCoeff(), 1.0);
    EXPECT_TRUE(testing::bitwise_equal(project_feasible(out, x, eps), out));
  }
}

TEST(Fgsm, ZeroGradientLeavesInputUnchanged) {
  std::mt19937_64 gen(3);
  const auto batch = testing::random_batch(6, {4, 1, 1}, 3, gen);
  const auto adv = fgsm(constant_logit_model(4, 3), batch, kEps);
  EXPECT_TRUE(testing::bitwise_equal(adv.perturbed, batch.inputs));
}

TEST(Fgsm, BinaryLinearHandPerturbation) {
  std::mt19937_64 gen(4);
  const int d = 5;
  Matrix w = Matrix::Zero(2, d);
  w.row(1) = testing::random_logits(1, d, gen, 1.0);
  Vector bias = Vector::Zero(2);
  const Classifier model = testing::linear_model(w, bias);
  const auto batch = testing::random_batch(10, {d, 1, 1}, 2, gen, 0.1, 0.9);
  const auto adv = fgsm(model, batch, kEps);
  for (Eigen::Index b = 0; b < batch.inputs.rows(); ++b) {
    double z = 0.0;
    for (int k = 0; k < d; ++k) z += w(1, k) * batch.inputs(b, k);
    const double sigma = 1.0 / (1.0 + std::exp(-z));
    const double y = batch.labels[static_cast<std::size_t>(b)];
    for (int k = 0; k < d; ++k) {
      const double g = (sigma - y) * w(1, k);
      const double s = g > 0 ? 1.0 : (g < 0 ? -1.0 : 0.0);
      EXPECT_EQ(adv.perturbed(b, k), batch.inputs(b, k) + kEps * s);
    }
  }
}

TEST(Fgsm, EqualsSingleStepPgdBitwise) {
  std::mt19937_64 gen(5);
  Rng rng(5);
  const Classifier model(Architecture::mlp(4, {6}, 3), rng);
  const auto batch = testing::random_batch(8, {4, 1, 1}, 3, gen);
  const auto a = fgsm(model, batch, kEps);
  const auto b = pgd(model, batch, AttackConfig::pgd(1, kEps, kEps, false), nullptr);
  EXPECT_TRUE(testing::bitwise_equal(a.perturbed, b.perturbed));
}

TEST(Fgsm, LinearMulticlassAttainsBruteForceVertexMaximum) {
  std::mt19937_64 gen(6);
  const int d = 8;
  for (int trial = 0; trial < 20; ++trial) {
    const int classes = 2 + trial % 4;
    const Matrix w = testing::random_logits(classes, d, gen, 1.0);
    const Vector bias = testing::random_logits(classes, 1, gen, 0.5);
    const Classifier model = testing::linear_model(w, bias);
    auto batch = testing::random_batch(1, {d, 1, 1}, classes, gen);
    const auto adv = fgsm(model, batch, kEps);
    const auto ce = [&](const Matrix& x) { return cross_entropy(forward_logits(model, x), batch.labels); };
    EXPECT_NEAR(ce(adv.perturbed), testing::max_over_sign_vertices(ce, batch.inputs, kEps), 1e-10);
  }
}

TEST(Pgd, KlWithoutReferenceThrows) {
  Classifier model(Architecture::mlp(2, {}, 2));
  std::mt19937_64 gen(7);
  const auto batch = testing::random_batch(2, {2, 1, 1}, 2, gen);
  EXPECT_THROW(pgd(model, batch, AttackConfig::pgd(2, kEps, kEps / 2, false, ObjectiveKind::kKl),
                   nullptr),
               std::invalid_argument);
}

TEST(Pgd, RandomStartWithoutRngThrows) {
  Classifier model(Architecture::mlp(2, {}, 2));
  std::mt19937_64 gen(7);
  const auto batch = testing::random_batch(2, {2, 1, 1}, 2, gen);
  EXPECT_THROW(pgd(model, batch, AttackConfig::pgd(2), nullptr), std::invalid_argument);
}

TEST(Pgd, DeterministicWithoutRandomStart) {
  std::mt19937_64 gen(8);
  Rng init(8);
  const Classifier model(Architecture::mlp(3, {5}, 3), init);
  const auto batch = testing::random_batch(5, {3, 1, 1}, 3, gen);
  const auto cfg = AttackConfig::pgd(7, kEps, kEps / 4, false);
  EXPECT_TRUE(testing::bitwise_equal(pgd(model, batch, cfg, nullptr).perturbed,
                                     pgd(model, batch, cfg, nullptr).perturbed));
}

TEST(Pgd, SameSeedSameRandomStart) {
  std::mt19937_64 gen(9);
  Rng init(9);
  const Classifier model(Architecture::mlp(3, {5}, 3), init);
  const auto batch = testing::random_batch(5, {3, 1, 1}, 3, gen);
  Rng a(77);
  Rng b(77);
  EXPECT_TRUE(testing::bitwise_equal(pgd(model, batch, AttackConfig::pgd(3), &a).perturbed,
                                     pgd(model, batch, AttackConfig::pgd(3), &b).perturbed));
}

TEST(Pgd, BinaryLinearTenStepsReachesFgsmVertex) {
  std::mt19937_64 gen(10);
  const int d = 6;
  Matrix w = Matrix::Zero(2, d);
  w.row(1) = testing::random_logits(1, d, gen, 1.0);
  const Classifier model = testing::linear_model(w, Vector::Zero(2));
  const auto batch = testing::random_batch(12, {d, 1, 1}, 2, gen, 0.1, 0.9);
  const auto adv = pgd(model, batch, AttackConfig::pgd(10, kEps, 2.0 / 255.0, false), nullptr);
  const auto vertex = fgsm(model, batch, kEps);
  EXPECT_GE(cross_entropy(forward_logits(model, adv.perturbed), batch.labels),
            cross_entropy(forward_logits(model, batch.inputs), batch.labels));
  for (Eigen::Index i = 0; i < adv.perturbed.size(); ++i) {
    EXPECT_NEAR(adv.perturbed.data()[i], vertex.perturbed.data()[i], 1e-15);
  }
}

TEST(Pgd, FeasibleOnThousandRandomBatches) {
  std::mt19937_64 gen(11);
  Rng init(11);
  const Classifier model(Architecture::mlp(4, {8}, 3), init);
  Rng start(12);
  const ObjectiveKind objectives[] = {ObjectiveKind::kCrossEntropy, ObjectiveKind::kKl,
                                      ObjectiveKind::kCwMargin};
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_real_distribution<double> eps_dist(1e-3, 0.3);
    const double eps = eps_dist(gen);
    const AttackConfig cfg =
        AttackConfig::pgd(1 + trial % 5, eps, eps * (0.1 + 0.9 * (trial % 7) / 6.0),
                          trial % 2 == 0, objectives[trial % 3]);
    const auto batch = testing::random_batch(4, {4, 1, 1}, 3, gen, 0.0, 1.0);
    const Logits ref = forward_logits(model, batch.inputs);
    const auto adv = pgd(model, batch, cfg, &start,
                         cfg.objective == ObjectiveKind::kKl ? &ref : nullptr);
    expect_feasible(adv, eps);
  }
}

TEST(Pgd, CleanConfigReturnsInputs) {
  std::mt19937_64 gen(12);
  Rng init(12);
  const Classifier model(Architecture::mlp(2, {3}, 2), init);
  const auto batch = testing::random_batch(4, {2, 1, 1}, 2, gen);
  EXPECT_TRUE(testing::bitwise_equal(pgd(model, batch, AttackConfig::clean(), nullptr).perturbed,
                                     batch.inputs));
}

TEST(CraftForMethod, AtDispatchesToPgdCrossEntropy) {
  std::mt19937_64 gen(13);
  Rng init(13);
  const Classifier model(Architecture::mlp(3, {4}, 3), init);
  const auto batch = testing::random_batch(5, {3, 1, 1}, 3, gen);
  const auto cfg = AttackConfig::pgd(5);
  Rng a(1), b(1), c(1);
  const auto at = craft_for_method(model, MethodSpec::at(), batch, cfg, &a);
  const auto direct = pgd(model, batch, cfg, &b);
  const auto alp = craft_for_method(model, MethodSpec::alp(), batch, cfg, &c);
  EXPECT_TRUE(testing::bitwise_equal(at.perturbed, direct.perturbed));
  EXPECT_TRUE(testing::bitwise_equal(alp.perturbed, at.perturbed));
}

TEST(CraftForMethod, TradesUsesOwnCleanLogitsAsKlReference) {
  std::mt19937_64 gen(14);
  Rng init(14);
  const Classifier model(Architecture::mlp(3, {4}, 3), init);
  const auto batch = testing::random_batch(5, {3, 1, 1}, 3, gen);
  auto cfg = AttackConfig::pgd(5);
  Rng a(2), b(2);
  const auto trades = craft_for_method(model, MethodSpec::trades(), batch, cfg, &a);
  cfg.objective = ObjectiveKind::kKl;
  const Logits clean = forward_logits(model, batch.inputs);
  const auto direct = pgd(model, batch, cfg, &b, &clean);
  EXPECT_TRUE(testing::bitwise_equal(trades.perturbed, direct.perturbed));
}

TEST(CraftForMethod, TradesOnConstantModelOnlyRandomStart) {
  std::mt19937_64 gen(15);
  const Classifier model = constant_logit_model(3, 3);
  const auto batch = testing::random_batch(5, {3, 1, 1}, 3, gen);
  Rng a(3), b(3);
  const auto adv = craft_for_method(model, MethodSpec::trades(), batch, AttackConfig::pgd(5), &a);
  Matrix start = batch.inputs;
  for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] += b.uniform(-kEps, kEps);
  EXPECT_TRUE(testing::bitwise_equal(adv.perturbed, project_feasible(start, batch.inputs, kEps)));
}

}  // namespace
}  // namespace collabat
