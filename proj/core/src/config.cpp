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

#include "collabat/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json_io.hpp"

namespace collabat {

using detail::Json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument("config field '" + field + "': " + message), field_(std::move(field)) {}

std::vector<NamedAttack> default_eval_attacks() {
  const double eps = 8.0 / 255.0;
  const double step = 2.0 / 255.0;
  return {
      {"clean", AttackConfig::clean()},
      {"fgsm", AttackConfig::fgsm(eps)},
      {"pgd20", AttackConfig::pgd(20, eps, step, true, ObjectiveKind::kCrossEntropy)},
      {"cw_inf", AttackConfig::pgd(20, eps, step, true, ObjectiveKind::kCwMargin)},
  };
}

namespace {

template <typename T>
T field(const Json& j, const std::string& key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key, "has the wrong type");
  }
}

template <typename Fn>
void rethrow_as(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

InputShape expected_input(const DatasetSpec& d) {
  if (d.name == "two-moons") return {2, 1, 1};
  if (d.name == "gaussian-blobs") return {d.dim, 1, 1};
  if (d.name == "tiny-images-subset") return {1, d.image_size, d.image_size};
  return {0, 0, 0};
}

DatasetSpec parse_dataset(const Json& j) {
  const std::string where = "dataset";
  detail::reject_unknown_keys(
      j, {"name", "size", "noise", "seed", "classes", "dim", "image_size", "path"}, where);
  DatasetSpec d;
  d.name = field<std::string>(j, "name", where, d.name);
  d.size = field<int>(j, "size", where, d.size);
  d.noise = field<double>(j, "noise", where, d.noise);
  d.seed = field<std::uint64_t>(j, "seed", where, d.seed);
  d.classes = field<int>(j, "classes", where, d.classes);
  d.dim = field<int>(j, "dim", where, d.dim);
  d.image_size = field<int>(j, "image_size", where, d.image_size);
  d.path = field<std::string>(j, "path", where, d.path);
  rethrow_as(where, [&] { d.validate(); });
  return d;
}

TrainConfig parse_train(const Json& j) {
  const std::string where = "train";
  detail::reject_unknown_keys(j,
                              {"epochs", "batch_size", "base_lr", "lr_drops", "momentum",
                               "weight_decay", "seed", "inner_attack"},
                              where);
  TrainConfig t;
  t.epochs = field<int>(j, "epochs", where, t.epochs);
  t.batch_size = field<int>(j, "batch_size", where, t.batch_size);
  t.base_lr = field<double>(j, "base_lr", where, t.base_lr);
  t.momentum = field<double>(j, "momentum", where, t.momentum);
  t.weight_decay = field<double>(j, "weight_decay", where, t.weight_decay);
  t.seed = field<std::uint64_t>(j, "seed", where, t.seed);
  if (j.contains("lr_drops")) {
    const Json& drops = j.at("lr_drops");
    if (!drops.is_array()) throw ConfigError("train.lr_drops", "expected a list");
    t.lr_drops.clear();
    for (const auto& d : drops) {
      if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number()) {
        throw ConfigError("train.lr_drops", "entries must be [epoch, divisor]");
      }
      t.lr_drops.push_back({d[0].get<int>(), d[1].get<double>()});
    }
  }
  if (j.contains("inner_attack")) {
    detail::reject_unknown_keys(
        j.at("inner_attack"), {"epsilon", "step_size", "iterations", "random_start", "objective"},
        "train.inner_attack");
    t.inner_attack = detail::attack_from_json(j.at("inner_attack"), t.inner_attack,
                                              "train.inner_attack");
  }
  rethrow_as(where, [&] { t.validate(); });
  return t;
}

CollabConfig parse_collab(const Json& j) {
  const std::string where = "collab";
  detail::reject_unknown_keys(j, {"alpha", "mode"}, where);
  CollabConfig c;
  c.alpha = field<double>(j, "alpha", where, c.alpha);
  rethrow_as("collab.mode", [&] {
    c.mode = parse_collab_mode(field<std::string>(j, "mode", where, to_string(c.mode)));
  });
  rethrow_as("collab.alpha", [&] { c.validate(); });
  return c;
}

std::vector<NamedAttack> parse_eval(const Json& j) {
  if (!j.is_array()) throw ConfigError("eval", "expected a list of attacks");
  std::vector<NamedAttack> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "eval[" + std::to_string(i) + "]";
    detail::reject_unknown_keys(
        j[i], {"name", "epsilon", "step_size", "iterations", "random_start", "objective"}, where);
    NamedAttack a;
    a.name = field<std::string>(j[i], "name", where, "");
    if (!valid_name(a.name)) throw ConfigError(where + ".name", "must be a non-empty identifier");
    if (!seen.insert(a.name).second) throw ConfigError(where + ".name", "duplicate attack name");
    if (!j[i].contains("epsilon")) throw ConfigError(where + ".epsilon", "missing");
    a.attack = detail::attack_from_json(j[i], AttackConfig::pgd(20), where);
    out.push_back(a);
  }
  return out;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["dataset"] = {{"name", c.dataset.name},         {"size", c.dataset.size},
                  {"noise", c.dataset.noise},       {"seed", c.dataset.seed},
                  {"classes", c.dataset.classes},   {"dim", c.dataset.dim},
                  {"image_size", c.dataset.image_size}, {"path", c.dataset.path}};
  j["participants"] = Json::array();
  for (const auto& p : c.participants) {
    j["participants"].push_back({{"name", p.name},
                                 {"architecture", detail::architecture_to_json(p.architecture, true)},
                                 {"method", detail::method_to_json(p.method)}});
  }
  j["collab"] = {{"alpha", c.collab.alpha}, {"mode", to_string(c.collab.mode)}};
  Json drops = Json::array();
  for (const auto& d : c.train.lr_drops) drops.push_back({d.epoch, d.divisor});
  j["train"] = {{"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"base_lr", c.train.base_lr},
                {"lr_drops", drops},
                {"momentum", c.train.momentum},
                {"weight_decay", c.train.weight_decay},
                {"seed", c.train.seed},
                {"inner_attack", detail::attack_to_json(c.train.inner_attack)}};
  j["eval"] = Json::array();
  for (const auto& a : c.eval) {
    Json e = detail::attack_to_json(a.attack);
    e["name"] = a.name;
    j["eval"].push_back(e);
  }
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
  }
  detail::reject_unknown_keys(root, {"dataset", "participants", "collab", "train", "eval", "output"},
                              "");
  ExperimentConfig c;
  if (root.contains("dataset")) c.dataset = parse_dataset(root.at("dataset"));
  if (root.contains("collab")) c.collab = parse_collab(root.at("collab"));
  if (root.contains("train")) c.train = parse_train(root.at("train"));
  if (root.contains("eval")) c.eval = parse_eval(root.at("eval"));
  if (root.contains("output")) {
    detail::reject_unknown_keys(root.at("output"), {"dir"}, "output");
    c.output_dir = field<std::string>(root.at("output"), "dir", "output", c.output_dir);
  }

  if (!root.contains("participants") || !root.at("participants").is_array() ||
      root.at("participants").empty()) {
    throw ConfigError("participants", "expected a non-empty list");
  }
  const int classes = c.dataset.resolved_classes();
  const InputShape input = expected_input(c.dataset);
  std::set<std::string> names;
  const Json& list = root.at("participants");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "participants[" + std::to_string(i) + "]";
    detail::reject_unknown_keys(list[i], {"name", "architecture", "method"}, where);
    ParticipantConfig p;
    p.name = field<std::string>(list[i], "name", where, "");
    if (!valid_name(p.name)) {
      throw ConfigError(where + ".name", "must be a non-empty identifier of [A-Za-z0-9_-]");
    }
    if (!names.insert(p.name).second) throw ConfigError(where + ".name", "duplicate name");
    if (!list[i].contains("architecture")) throw ConfigError(where + ".architecture", "missing");
    if (!list[i].contains("method")) throw ConfigError(where + ".method", "missing");
    p.architecture = detail::architecture_from_json(list[i].at("architecture"), classes,
                                                    where + ".architecture");
    p.method = detail::method_from_json(list[i].at("method"), where + ".method");
    if (classes > 0 && p.architecture.classes != classes) {
      throw ConfigError(where + ".architecture.classes",
                        "does not match the dataset's " + std::to_string(classes) + " classes");
    }
    if (input.size() > 0 && !(p.architecture.input == input)) {
      throw ConfigError(where + ".architecture",
                        "input shape " + to_string(p.architecture.input) +
                            " does not match the dataset's " + to_string(input));
    }
    c.participants.push_back(std::move(p));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_text(const ExperimentConfig& config) { return to_json(config).dump(2); }

std::string config_hash(const ExperimentConfig& config) {
  Json j = to_json(config);
  j.erase("output");
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace collabat
