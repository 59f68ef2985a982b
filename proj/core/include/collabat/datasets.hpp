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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "collabat/tensor.hpp"

namespace collabat {

/// Synthetic stand-ins for image benchmarks, plus an ingestion path for
/// user-supplied tensors.
///
///   two-moons           2-D, 2 classes; `noise` is the Gaussian jitter in
///                       the original moon coordinates before rescaling.
///   gaussian-blobs      `dim`-D, `classes` classes (default 3) around fixed
///                       centers; zero noise puts every sample on its center.
///   tiny-images-subset  1 x image_size x image_size, `classes` classes
///                       (default 10) of oriented gratings with per-sample
///                       phase/contrast jitter and pixel noise.
///   tensor-dir          reads `path`/train.bin and `path`/test.bin in the
///                       flat tensor layout below; size/noise/seed unused.
///
/// Every input lies in [0, 1]. Generated datasets are shuffled with the seed
/// and split 80/20 into train/test.
struct DatasetSpec {
  std::string name = "two-moons";
  int size = 1000;
  double noise = 0.1;
  std::uint64_t seed = 0;
  /// 0 means the dataset's default.
  int classes = 0;
  int dim = 2;
  int image_size = 16;
  std::string path;

  void validate() const;
  [[nodiscard]] int resolved_classes() const;
};

std::vector<std::string> dataset_names();

DatasetSplit generate_dataset(const DatasetSpec& spec);

/// Flat tensor file (little-endian):
///   bytes 0..7   magic "CATDATA1"
///   u32          version (1)
///   u64          example count N
///   u32 x 4      channels, height, width, classes
///   f64 x N*F    inputs, row-major, F = channels * height * width
///   i32 x N      labels
void write_tensor_file(const LabeledBatch& data, const std::filesystem::path& path);
LabeledBatch read_tensor_file(const std::filesystem::path& path);

}  // namespace collabat
