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

#include "collabat/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "collabat/checkpoint.hpp"
#include "collabat/datasets.hpp"

namespace collabat {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

const NamedAttack* find_attack(const ExperimentConfig& config, const std::string& name) {
  for (const auto& a : config.eval) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

AttackConfig resolve_attack(const ExperimentConfig& config, const std::string& name) {
  if (const NamedAttack* a = find_attack(config, name)) return a->attack;
  if (name == "clean") return AttackConfig::clean();
  throw ConfigError("eval", "no attack named '" + name + "'");
}

const ParticipantConfig* find_participant(const ExperimentConfig& config,
                                          const std::string& name) {
  for (const auto& p : config.participants) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Checkpoint load_compatible(const ExperimentConfig& config, const LabeledBatch& data,
                           const fs::path& path) {
  Checkpoint c = load_checkpoint(path);
  if (const ParticipantConfig* p = find_participant(config, c.participant)) {
    if (!(p->architecture == c.architecture)) {
      throw CheckpointError(path.string() + ": architecture differs from participant '" +
                            c.participant + "' in the config");
    }
  }
  if (c.architecture.classes != data.classes || c.architecture.input.size() != data.shape.size()) {
    throw CheckpointError(path.string() + ": checkpoint does not fit the configured dataset");
  }
  return c;
}

}  // namespace

TrainOutcome run_train(const ExperimentConfig& config, const fs::path& out_dir,
                       std::ostream* progress) {
  const auto start = std::chrono::steady_clock::now();
  config.collab.validate();
  config.train.validate();
  const DatasetSplit data = generate_dataset(config.dataset);

  std::vector<Participant> participants;
  for (const auto& p : config.participants) {
    if (p.architecture.input.size() != data.train.shape.size() ||
        p.architecture.classes != data.train.classes) {
      throw ConfigError("participants." + p.name + ".architecture",
                        "does not fit the dataset's inputs or classes");
    }
    participants.push_back(make_participant(p.name, p.architecture, p.method, config.train.seed));
  }

  EpochCallback on_epoch;
  if (progress != nullptr) {
    on_epoch = [&](const EpochRecord& r) {
      *progress << "epoch " << r.epoch << " lr " << r.lr;
      for (std::size_t i = 0; i < r.loss.size(); ++i) {
        *progress << " | " << config.participants[i].name << " loss " << r.loss[i] << " clean "
                  << r.clean_acc[i] << " pgd10 " << r.pgd10_acc[i];
      }
      *progress << '\n';
    };
  }

  TrainOutcome outcome;
  outcome.fit = fit(std::move(participants), data, config.collab, config.train, on_epoch);

  fs::create_directories(out_dir);
  std::vector<std::string> artifacts;
  write_text(out_dir / "log.csv", outcome.fit.log.to_csv());
  artifacts.push_back("log.csv");
  for (std::size_t i = 0; i < outcome.fit.best.size(); ++i) {
    const std::string& name = outcome.fit.log.participants[i];
    save_checkpoint(outcome.fit.best[i], out_dir / (name + "_best.ckpt"));
    save_checkpoint(outcome.fit.last[i], out_dir / (name + "_last.ckpt"));
    artifacts.push_back(name + "_best.ckpt");
    artifacts.push_back(name + "_last.ckpt");
  }
  artifacts.push_back("manifest.json");

  outcome.manifest.config_hash = config_hash(config);
  outcome.manifest.toolkit_version = toolkit_version();
  outcome.manifest.seed = config.train.seed;
  outcome.manifest.artifacts = artifacts;
  outcome.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(out_dir / "manifest.json", manifest_to_json(outcome.manifest));
  return outcome;
}

RobustnessReport run_eval(const ExperimentConfig& config, const EvalOptions& options,
                          const fs::path& out_dir) {
  if (options.checkpoints.empty()) throw std::invalid_argument("eval needs at least one checkpoint");
  const DatasetSplit data = generate_dataset(config.dataset);
  std::vector<Checkpoint> checkpoints;
  for (const auto& path : options.checkpoints) {
    checkpoints.push_back(load_compatible(config, data.test, path));
  }

  RobustnessReport report;
  for (const auto& c : checkpoints) {
    const Classifier model = c.to_classifier();
    for (const auto& a : config.eval) {
      Rng rng = Rng::stream(config.train.seed, "eval", c.participant,
                            static_cast<std::uint64_t>(c.epoch));
      ReportEntry entry = robust_accuracy(model, data.test, a.attack, &rng, a.name);
      entry.model = c.participant + "@" + std::to_string(c.epoch);
      report.entries.push_back(std::move(entry));
    }
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", report_to_json(report));
  write_text(out_dir / "report.csv", report_to_csv(report));

  if (options.confusion) {
    if (checkpoints.size() != 2) {
      throw std::invalid_argument("--confusion needs exactly two checkpoints");
    }
    AnalyzeOptions analyze;
    analyze.first = options.checkpoints[0];
    analyze.second = options.checkpoints[1];
    analyze.attack = options.confusion_attack;
    analyze.crafter = options.crafter;
    analyze.zero_diagonal = options.zero_diagonal;
    run_analyze(config, analyze, out_dir);
  }
  return report;
}

PairAnalysis run_analyze(const ExperimentConfig& config, const AnalyzeOptions& options,
                         const fs::path& out_dir) {
  const DatasetSplit data = generate_dataset(config.dataset);
  const Checkpoint first = load_compatible(config, data.test, options.first);
  const Checkpoint second = load_compatible(config, data.test, options.second);
  if (first.architecture.classes != second.architecture.classes) {
    throw std::invalid_argument("checkpoints disagree on class count");
  }
  const AttackConfig attack = resolve_attack(config, options.attack);
  const Checkpoint& crafter = options.crafter == Crafter::kFirst ? first : second;
  Rng rng = Rng::stream(config.train.seed, "analyze", crafter.participant,
                        static_cast<std::uint64_t>(crafter.epoch));

  const std::string first_name = first.participant + "@" + std::to_string(first.epoch);
  const std::string second_name = second.participant + "@" + std::to_string(second.epoch);
  PairAnalysis analysis =
      analyze_pair(first.to_classifier(), second.to_classifier(), data.test, attack,
                   options.crafter, &rng, first_name, second_name, options.attack);

  fs::create_directories(out_dir);
  write_text(out_dir / "confusion.csv", analysis.confusion.to_csv(options.zero_diagonal));
  write_text(out_dir / "confusion.json",
             confusion_to_json(analysis.confusion, options.zero_diagonal));
  write_text(out_dir / "discrepancy.json",
             discrepancy_to_json(analysis.discrepancy, analysis.confusion));
  return analysis;
}

DatasetSplit run_gen_data(const ExperimentConfig& config, const fs::path& out_dir) {
  DatasetSplit data = generate_dataset(config.dataset);
  fs::create_directories(out_dir);
  write_tensor_file(data.train, out_dir / "train.bin");
  write_tensor_file(data.test, out_dir / "test.bin");
  return data;
}

}  // namespace collabat
