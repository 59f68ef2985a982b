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

#include "collabat/datasets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "collabat/rng.hpp"

namespace collabat {
namespace {

constexpr char kDataMagic[8] = {'C', 'A', 'T', 'D', 'A', 'T', 'A', '1'};
constexpr std::uint32_t kDataVersion = 1;
constexpr double kTrainFraction = 0.8;

LabeledBatch two_moons(const DatasetSpec& spec, Rng& rng) {
  LabeledBatch data;
  data.classes = 2;
  data.shape = {2, 1, 1};
  const int n = spec.size;
  const int outer = n - n / 2;
  data.inputs.resize(n, 2);
  data.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool is_outer = i < outer;
    const int k = is_outer ? i : i - outer;
    const int m = is_outer ? outer : n - outer;
    const double t = m > 1 ? std::numbers::pi * k / (m - 1) : 0.0;
    double x = is_outer ? std::cos(t) : 1.0 - std::cos(t);
    double y = is_outer ? std::sin(t) : 0.5 - std::sin(t);
    x += rng.normal(0.0, 1.0) * spec.noise;
    y += rng.normal(0.0, 1.0) * spec.noise;
    // Moon coordinates span x in [-1, 2], y in [-0.5, 1].
    data.inputs(i, 0) = std::clamp((x + 1.5) / 4.0, 0.0, 1.0);
    data.inputs(i, 1) = std::clamp((y + 1.0) / 2.5, 0.0, 1.0);
    data.labels[static_cast<std::size_t>(i)] = is_outer ? 0 : 1;
  }
  return data;
}

LabeledBatch gaussian_blobs(const DatasetSpec& spec, Rng& rng) {
  const int classes = spec.resolved_classes();
  const int dim = spec.dim;
  Matrix centers(classes, dim);
  for (int k = 0; k < classes; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / classes;
    for (int d = 0; d < dim; ++d) {
      if (d == 0) {
        centers(k, d) = 0.5 + 0.3 * std::cos(angle);
      } else if (d == 1) {
        centers(k, d) = 0.5 + 0.3 * std::sin(angle);
      } else {
        centers(k, d) = 0.5;
      }
    }
  }
  LabeledBatch data;
  data.classes = classes;
  data.shape = {dim, 1, 1};
  data.inputs.resize(spec.size, dim);
  data.labels.resize(static_cast<std::size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    const int k = i % classes;
    for (int d = 0; d < dim; ++d) {
      const double jitter = spec.noise > 0.0 ? rng.normal(0.0, spec.noise) : 0.0;
      data.inputs(i, d) = std::clamp(centers(k, d) + jitter, 0.0, 1.0);
    }
    data.labels[static_cast<std::size_t>(i)] = k;
  }
  return data;
}

LabeledBatch tiny_images(const DatasetSpec& spec, Rng& rng) {
  const int classes = spec.resolved_classes();
  const int side = spec.image_size;
  struct Grating {
    double cos_theta, sin_theta, frequency, phase;
  };
  std::vector<Grating> prototypes;
  for (int k = 0; k < classes; ++k) {
    const double theta = std::numbers::pi * k / classes;
    const double frequency = 1.0 + (k % 3) * 0.75;
    prototypes.push_back({std::cos(theta), std::sin(theta), frequency,
                          rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  LabeledBatch data;
  data.classes = classes;
  data.shape = {1, side, side};
  data.inputs.resize(spec.size, side * side);
  data.labels.resize(static_cast<std::size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    const int k = i % classes;
    const Grating& g = prototypes[static_cast<std::size_t>(k)];
    const double phase = g.phase + rng.uniform(-0.6, 0.6);
    const double contrast = 0.3 * rng.uniform(0.6, 1.2);
    for (int yy = 0; yy < side; ++yy) {
      for (int xx = 0; xx < side; ++xx) {
        const double u = (xx * g.cos_theta + yy * g.sin_theta) / side;
        const double pixel = 0.5 + contrast * std::sin(2.0 * std::numbers::pi * g.frequency * u + phase) +
                             (spec.noise > 0.0 ? rng.normal(0.0, spec.noise) : 0.0);
        data.inputs(i, yy * side + xx) = std::clamp(pixel, 0.0, 1.0);
      }
    }
    data.labels[static_cast<std::size_t>(i)] = k;
  }
  return data;
}

DatasetSplit split(const LabeledBatch& all, Rng& rng) {
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto n_train = static_cast<std::size_t>(std::floor(kTrainFraction * all.size()));
  DatasetSplit out;
  out.train = all.select({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)});
  out.test = all.select({order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end()});
  return out;
}

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated tensor file " + path.string());
  return value;
}

}  // namespace

std::vector<std::string> dataset_names() {
  return {"two-moons", "gaussian-blobs", "tiny-images-subset", "tensor-dir"};
}

int DatasetSpec::resolved_classes() const {
  if (name == "two-moons") return 2;
  if (classes > 0) return classes;
  if (name == "gaussian-blobs") return 3;
  if (name == "tiny-images-subset") return 10;
  return 0;
}

void DatasetSpec::validate() const {
  const auto names = dataset_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown dataset '" + name + "'");
  }
  if (name == "tensor-dir") {
    if (path.empty()) throw std::invalid_argument("tensor-dir dataset requires a path");
    return;
  }
  if (size < 5) throw std::invalid_argument("dataset size must be >= 5");
  if (!(noise >= 0.0)) throw std::invalid_argument("dataset noise must be >= 0");
  if (classes < 0) throw std::invalid_argument("dataset classes must be >= 0");
  if (name == "two-moons" && classes != 0 && classes != 2) {
    throw std::invalid_argument("two-moons always has 2 classes");
  }
  if (name == "gaussian-blobs" && dim < 1) throw std::invalid_argument("dataset dim must be >= 1");
  if (name == "tiny-images-subset" && (image_size < 4 || image_size % 4 != 0)) {
    throw std::invalid_argument("image_size must be a positive multiple of 4");
  }
  if (resolved_classes() < 2) throw std::invalid_argument("dataset needs at least 2 classes");
}

DatasetSplit generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  if (spec.name == "tensor-dir") {
    const std::filesystem::path dir(spec.path);
    return {read_tensor_file(dir / "train.bin"), read_tensor_file(dir / "test.bin")};
  }
  Rng rng = Rng::stream(spec.seed, "data", spec.name);
  LabeledBatch all;
  if (spec.name == "two-moons") {
    all = two_moons(spec, rng);
  } else if (spec.name == "gaussian-blobs") {
    all = gaussian_blobs(spec, rng);
  } else {
    all = tiny_images(spec, rng);
  }
  all.validate();
  return split(all, rng);
}

void write_tensor_file(const LabeledBatch& data, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little);
  data.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kDataMagic, sizeof(kDataMagic));
  put<std::uint32_t>(out, kDataVersion);
  put<std::uint64_t>(out, data.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.shape.channels));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.shape.height));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.shape.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.classes));
  out.write(reinterpret_cast<const char*>(data.inputs.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(data.inputs.size())));
  for (int label : data.labels) put<std::int32_t>(out, label);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

LabeledBatch read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open tensor file " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDataMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path.string() + " is not a collabat tensor file");
  }
  if (take<std::uint32_t>(in, path) != kDataVersion) {
    throw std::runtime_error("unsupported tensor file version in " + path.string());
  }
  LabeledBatch data;
  const auto count = take<std::uint64_t>(in, path);
  data.shape.channels = static_cast<int>(take<std::uint32_t>(in, path));
  data.shape.height = static_cast<int>(take<std::uint32_t>(in, path));
  data.shape.width = static_cast<int>(take<std::uint32_t>(in, path));
  data.classes = static_cast<int>(take<std::uint32_t>(in, path));
  data.inputs.resize(static_cast<Eigen::Index>(count), data.shape.size());
  in.read(reinterpret_cast<char*>(data.inputs.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(data.inputs.size())));
  if (!in) throw std::runtime_error("truncated tensor file " + path.string());
  data.labels.resize(count);
  for (auto& label : data.labels) label = take<std::int32_t>(in, path);
  data.validate();
  return data;
}

}  // namespace collabat
