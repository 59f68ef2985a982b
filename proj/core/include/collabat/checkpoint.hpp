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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "collabat/classifier.hpp"
#include "collabat/objectives.hpp"

namespace collabat {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Snapshot of one participant's model.
///
/// On-disk layout (version 1, all integers and floats little-endian):
///
///   bytes 0..7     magic "CATCKPT1"
///   u32            format version (1)
///   u32            header length H in bytes
///   H bytes        UTF-8 JSON header:
///                    {"format": "collabat-checkpoint", "version": 1,
///                     "architecture": {...}, "classes": C, "epoch": e,
///                     "participant": name, "method": {"kind", "lambda"},
///                     "groups": [{"name", "shape", "count"}, ...]}
///   payload        float64 values of every group, in header order,
///                  each group row-major
///
/// The header alone is enough to interpret the payload.
struct Checkpoint {
  static constexpr std::uint32_t kFormatVersion = 1;

  Architecture architecture;
  ParameterSet params;
  int epoch = 0;
  std::string participant;
  MethodSpec method;

  static Checkpoint capture(const Classifier& model, int epoch, std::string participant,
                            MethodSpec method);
  [[nodiscard]] Classifier to_classifier() const;

  bool operator==(const Checkpoint&) const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace collabat
