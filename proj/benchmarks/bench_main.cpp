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

#include <benchmark/benchmark.h>

#include "collabat/collabat.hpp"

namespace {

using namespace collabat;

Architecture arch_for(int which) {
  return which == 0 ? Architecture::mlp(2, {32, 32}, 2)
                    : Architecture::conv({1, 16, 16}, {4, 4, 8, 8}, 10);
}

LabeledBatch batch_for(const Architecture& arch, int n) {
  DatasetSpec spec;
  if (arch.kind == Architecture::Kind::kConv) {
    spec.name = "tiny-images-subset";
    spec.image_size = arch.input.height;
  }
  spec.size = 5 * n;
  LabeledBatch train = generate_dataset(spec).train;
  std::vector<std::size_t> rows(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return train.select(rows);
}

void BM_ForwardBackward(benchmark::State& state) {
  const Architecture arch = arch_for(static_cast<int>(state.range(0)));
  Rng rng(1);
  const Classifier model(arch, rng);
  const LabeledBatch batch = batch_for(arch, 128);
  for (auto _ : state) {
    const ForwardPass pass = forward(model, batch.inputs);
    const auto ce = cross_entropy_with_grad(pass.logits, batch.labels);
    benchmark::DoNotOptimize(backward(model, pass, ce.grad, GradientTargets::kBoth));
  }
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1);

void BM_Pgd10(benchmark::State& state) {
  const Architecture arch = arch_for(static_cast<int>(state.range(0)));
  Rng rng(2);
  const Classifier model(arch, rng);
  const LabeledBatch batch = batch_for(arch, 128);
  const AttackConfig attack = AttackConfig::pgd(10);
  for (auto _ : state) benchmark::DoNotOptimize(pgd(model, batch, attack, &rng));
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_Pgd10)->Arg(0)->Arg(1);

void BM_CatTrainStep(benchmark::State& state) {
  const Architecture arch = arch_for(static_cast<int>(state.range(0)));
  const LabeledBatch batch = batch_for(arch, 128);
  TrainConfig train;
  TrainingState training = TrainingState::create(
      {make_participant("f", arch, MethodSpec::trades(), 0),
       make_participant("g", arch, MethodSpec::alp(), 0)},
      0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_step(training, batch, CollabConfig{}, train, 0, 0));
  }
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_CatTrainStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
