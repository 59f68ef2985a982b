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

#include "collabat/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace collabat {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'C', 'A', 'T', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

std::uint32_t get_u32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  std::memcpy(&v, in.data() + offset, 4);
  return v;
}

}  // namespace

Checkpoint Checkpoint::capture(const Classifier& model, int epoch, std::string participant,
                               MethodSpec method) {
  Checkpoint c;
  c.architecture = model.architecture();
  c.params = model.params();
  c.epoch = epoch;
  c.participant = std::move(participant);
  c.method = method;
  return c;
}

Classifier Checkpoint::to_classifier() const {
  Classifier model(architecture);
  model.set_params(params);
  return model;
}

bool Checkpoint::operator==(const Checkpoint& other) const {
  if (!(architecture == other.architecture) || epoch != other.epoch ||
      participant != other.participant || !(method == other.method) ||
      params.size() != other.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != other.params[i].size()) return false;
    if (std::memcmp(params[i].data(), other.params[i].data(),
                    sizeof(double) * static_cast<std::size_t>(params[i].size())) != 0) {
      return false;
    }
  }
  return true;
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  const Classifier layout(checkpoint.architecture);
  if (checkpoint.params.size() != layout.groups().size()) {
    throw CheckpointError("checkpoint parameters do not match the architecture");
  }
  detail::Json header;
  header["format"] = "collabat-checkpoint";
  header["version"] = Checkpoint::kFormatVersion;
  header["architecture"] = detail::architecture_to_json(checkpoint.architecture, false);
  header["classes"] = checkpoint.architecture.classes;
  header["epoch"] = checkpoint.epoch;
  header["participant"] = checkpoint.participant;
  header["method"] = detail::method_to_json(checkpoint.method);
  header["groups"] = detail::Json::array();
  for (std::size_t i = 0; i < layout.groups().size(); ++i) {
    const auto& g = layout.groups()[i];
    if (checkpoint.params[i].size() != g.size()) {
      throw CheckpointError("parameter group '" + g.name + "' has the wrong size");
    }
    header["groups"].push_back({{"name", g.name}, {"shape", g.shape}, {"count", g.size()}});
  }
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, Checkpoint::kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (const auto& p : checkpoint.params) {
    out.append(reinterpret_cast<const char*>(p.data()),
               sizeof(double) * static_cast<std::size_t>(p.size()));
  }
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a collabat checkpoint (bad magic)");
  }
  const std::uint32_t version = get_u32(bytes, 8);
  if (version != Checkpoint::kFormatVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::size_t header_len = get_u32(bytes, 12);
  if (bytes.size() < 16 + header_len) throw CheckpointError("truncated checkpoint header");

  Checkpoint c;
  std::size_t offset = 16 + header_len;
  try {
    const auto header = detail::Json::parse(bytes.substr(16, header_len));
    if (header.at("format") != "collabat-checkpoint") {
      throw CheckpointError("unexpected checkpoint format tag");
    }
    c.architecture = detail::architecture_from_json(header.at("architecture"),
                                                    header.at("classes").get<int>(),
                                                    "checkpoint.architecture");
    c.epoch = header.at("epoch").get<int>();
    c.participant = header.at("participant").get<std::string>();
    c.method = detail::method_from_json(header.at("method"), "checkpoint.method");

    const Classifier layout(c.architecture);
    const auto& groups = header.at("groups");
    if (groups.size() != layout.groups().size()) {
      throw CheckpointError("checkpoint group count does not match its architecture");
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto& expected = layout.groups()[i];
      const auto shape = groups[i].at("shape").get<std::vector<int>>();
      if (groups[i].at("name").get<std::string>() != expected.name || shape != expected.shape) {
        throw CheckpointError("checkpoint group '" + expected.name +
                              "' does not match its architecture");
      }
      const std::size_t count = static_cast<std::size_t>(expected.size());
      if (bytes.size() < offset + count * sizeof(double)) {
        throw CheckpointError("truncated checkpoint payload");
      }
      Vector values(static_cast<Eigen::Index>(count));
      std::memcpy(values.data(), bytes.data() + offset, count * sizeof(double));
      offset += count * sizeof(double);
      c.params.push_back(std::move(values));
    }
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") + e.what());
  }
  if (offset != bytes.size()) throw CheckpointError("trailing bytes after checkpoint payload");
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const std::string bytes = serialize_checkpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

}  // namespace collabat
