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

// collabat: train, evaluate and compare collaboratively adversarially trained
// classifiers.
//
//   collabat train    --config exp.json [--seed N] [--out DIR]
//   collabat eval     --config exp.json --checkpoint a.ckpt [--checkpoint b.ckpt]
//                     [--confusion] [--zero-diagonal] [--attack NAME] [--out DIR]
//   collabat analyze  --config exp.json --checkpoint a.ckpt --checkpoint b.ckpt
//                     [--attack NAME] [--crafter first|second] [--zero-diagonal] [--out DIR]
//   collabat gen-data --config exp.json [--seed N] [--out DIR]
//
// Exit codes: 0 success, 1 other failure, 2 invalid config or arguments,
// 3 training diverged, 4 unreadable or incompatible checkpoint.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collabat/collabat.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitCheckpoint = 4;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config (JSON)")->required();
  cmd->add_option("--seed", args.seed, "Override train.seed");
  cmd->add_option("--out", args.out, "Output directory (default: output.dir from the config)");
}

collabat::ExperimentConfig load(const CommonArgs& args) {
  collabat::ExperimentConfig config = collabat::load_config(args.config);
  if (args.seed) config.train.seed = *args.seed;
  if (!args.out.empty()) config.output_dir = args.out;
  return config;
}

collabat::Crafter parse_crafter(const std::string& text) {
  if (text == "first") return collabat::Crafter::kFirst;
  if (text == "second") return collabat::Crafter::kSecond;
  throw std::invalid_argument("--crafter must be 'first' or 'second'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative adversarial training toolkit"};
  app.set_version_flag("--version", collabat::toolkit_version());
  app.require_subcommand(1);

  CommonArgs train_args;
  auto* train = app.add_subcommand("train", "Train all participants and write log, checkpoints, manifest");
  add_common(train, train_args);
  bool quiet = false;
  train->add_flag("--quiet", quiet, "Suppress per-epoch progress");

  CommonArgs eval_args;
  std::vector<std::string> eval_checkpoints;
  bool eval_confusion = false;
  bool eval_zero_diag = false;
  std::string eval_attack = "clean";
  auto* eval = app.add_subcommand("eval", "Run configured attacks against checkpoints");
  add_common(eval, eval_args);
  eval->add_option("--checkpoint", eval_checkpoints, "Checkpoint file (repeatable)")->required();
  eval->add_flag("--confusion", eval_confusion, "With two checkpoints, also write confusion/discrepancy");
  eval->add_flag("--zero-diagonal", eval_zero_diag, "Zero the confusion CSV diagonal");
  eval->add_option("--attack", eval_attack, "Attack whose inputs feed --confusion");

  CommonArgs analyze_args;
  std::vector<std::string> analyze_checkpoints;
  std::string analyze_attack = "clean";
  std::string crafter = "first";
  bool analyze_zero_diag = false;
  auto* analyze = app.add_subcommand("analyze", "Cross-model confusion matrix and prediction discrepancy");
  add_common(analyze, analyze_args);
  analyze->add_option("--checkpoint", analyze_checkpoints, "Exactly two checkpoint files")
      ->required()
      ->expected(2);
  analyze->add_option("--attack", analyze_attack, "Configured eval attack, or 'clean'");
  analyze->add_option("--crafter", crafter, "Which checkpoint crafts the shared inputs");
  analyze->add_flag("--zero-diagonal", analyze_zero_diag, "Zero the confusion CSV diagonal");

  CommonArgs gen_args;
  auto* gen = app.add_subcommand("gen-data", "Write the configured dataset as train.bin/test.bin");
  add_common(gen, gen_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const auto config = load(train_args);
      const auto outcome =
          collabat::run_train(config, config.output_dir, quiet ? nullptr : &std::cout);
      std::cout << "wrote " << outcome.manifest.artifacts.size() << " artifacts to "
                << config.output_dir << " (config " << outcome.manifest.config_hash.substr(0, 12)
                << ")\n";
    } else if (eval->parsed()) {
      const auto config = load(eval_args);
      collabat::EvalOptions options;
      options.checkpoints.assign(eval_checkpoints.begin(), eval_checkpoints.end());
      options.confusion = eval_confusion;
      options.zero_diagonal = eval_zero_diag;
      options.confusion_attack = eval_attack;
      const auto report = collabat::run_eval(config, options, config.output_dir);
      for (const auto& e : report.entries) {
        std::cout << e.model << ' ' << e.attack_name << ' ' << e.accuracy << " (" << e.correct
                  << '/' << e.count << ")\n";
      }
    } else if (analyze->parsed()) {
      const auto config = load(analyze_args);
      collabat::AnalyzeOptions options;
      options.first = analyze_checkpoints.at(0);
      options.second = analyze_checkpoints.at(1);
      options.attack = analyze_attack;
      options.crafter = parse_crafter(crafter);
      options.zero_diagonal = analyze_zero_diag;
      const auto result = collabat::run_analyze(config, options, config.output_dir);
      std::cout << "intersection " << result.discrepancy.intersection << " discrepancy "
                << result.discrepancy.discrepancy << " over " << result.discrepancy.count
                << " inputs\n";
    } else if (gen->parsed()) {
      const auto config = load(gen_args);
      const auto data = collabat::run_gen_data(config, config.output_dir);
      std::cout << "wrote " << data.train.size() << " train / " << data.test.size()
                << " test examples to " << config.output_dir << '\n';
    }
  } catch (const collabat::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const collabat::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const collabat::CheckpointError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckpoint;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
