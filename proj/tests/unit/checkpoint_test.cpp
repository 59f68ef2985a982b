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

#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "collabat/checkpoint.hpp"
#include "oracles.hpp"

namespace collabat {
namespace {

Checkpoint sample(const Architecture& arch = Architecture::conv({1, 8, 8}, {2, 3, 3, 4}, 5)) {
  Rng rng(4);
  return Checkpoint::capture(Classifier(arch, rng), 17, "g", MethodSpec::alp(0.25));
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "collabat_checkpoint_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Checkpoint, RoundTripIsBitwise) {
  for (const auto& arch : {Architecture::mlp(2, {8, 8}, 2), Architecture::mlp(3, {}, 4),
                           Architecture::conv({1, 8, 8}, {2, 3, 3, 4}, 5)}) {
    const Checkpoint c = sample(arch);
    const Checkpoint back = deserialize_checkpoint(serialize_checkpoint(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.epoch, 17);
    EXPECT_EQ(back.participant, "g");
    EXPECT_EQ(back.method, MethodSpec::alp(0.25));
    EXPECT_TRUE(testing::bitwise_equal(back.params, c.params));
    EXPECT_EQ(serialize_checkpoint(back), serialize_checkpoint(c));
  }
}

TEST(Checkpoint, FileRoundTripAndModelEquivalence) {
  const Checkpoint c = sample();
  const auto path = temp_file("rt.ckpt");
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  EXPECT_EQ(back, c);
  std::mt19937_64 gen(1);
  const Matrix x = testing::random_unit_box(4, 64, gen);
  EXPECT_TRUE(testing::bitwise_equal(forward_logits(back.to_classifier(), x),
                                     forward_logits(c.to_classifier(), x)));
}

TEST(Checkpoint, HeaderIsSelfDescribing) {
  const std::string bytes = serialize_checkpoint(sample());
  ASSERT_EQ(bytes.substr(0, 8), "CATCKPT1");
  std::uint32_t version = 0, header_len = 0;
  std::memcpy(&version, bytes.data() + 8, 4);
  std::memcpy(&header_len, bytes.data() + 12, 4);
  EXPECT_EQ(version, 1u);
  const auto header = nlohmann::json::parse(bytes.substr(16, header_len));
  EXPECT_EQ(header["format"], "collabat-checkpoint");
  EXPECT_EQ(header["classes"], 5);
  EXPECT_EQ(header["epoch"], 17);
  std::size_t values = 0;
  for (const auto& g : header["groups"]) values += g["count"].get<std::size_t>();
  EXPECT_EQ(bytes.size(), 16 + header_len + values * sizeof(double));
}

TEST(Checkpoint, CorruptInputsRaiseCheckpointError) {
  const std::string good = serialize_checkpoint(sample());
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_checkpoint(bad_magic), CheckpointError);
  std::string bad_version = good;
  bad_version[8] = 9;
  EXPECT_THROW(deserialize_checkpoint(bad_version), CheckpointError);
  EXPECT_THROW(deserialize_checkpoint(good.substr(0, good.size() - 8)), CheckpointError);
  EXPECT_THROW(deserialize_checkpoint(good + "x"), CheckpointError);
  EXPECT_THROW(deserialize_checkpoint(good.substr(0, 10)), CheckpointError);
  std::string bad_header = good;
  bad_header[17] = '#';
  EXPECT_THROW(deserialize_checkpoint(bad_header), CheckpointError);
  EXPECT_THROW(load_checkpoint(temp_file("missing.ckpt")), CheckpointError);
}

TEST(Checkpoint, CaptureRejectsMismatchedParameters) {
  Checkpoint c = sample(Architecture::mlp(2, {4}, 2));
  c.params.pop_back();
  EXPECT_THROW(c.to_classifier(), std::exception);
}

}  // namespace
}  // namespace collabat
