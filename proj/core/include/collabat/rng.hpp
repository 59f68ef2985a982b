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
#include <random>
#include <string_view>

namespace collabat {

/// Seeded random stream. Every random draw in the toolkit goes through one of
/// these so that (seed, config) fully determines a run.
///
/// Named substreams: `Rng::stream(seed, "init", "f")` always yields the same
/// sequence, independent of how many other streams were drawn before it.
/// Stream labels used by the toolkit:
///   "init"   / participant name           parameter initialization
///   "shuffle"                             per-epoch training order
///   "attack" / participant name           random starts during training
///   "eval"   / participant name / epoch   random starts during evaluation
///   "data"   / dataset name               synthetic dataset generation
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t root_seed, std::string_view label,
                    std::string_view sublabel = {}, std::uint64_t index = 0);

  double uniform(double lo, double hi);
  double normal(double mean, double stddev);
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace collabat
