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

#include "collabat/reports.hpp"

#include <cstdio>
#include <sstream>

#include "json_io.hpp"

#ifndef COLLABAT_VERSION
#define COLLABAT_VERSION "0.0.0"
#endif

namespace collabat {

using detail::Json;

std::string toolkit_version() { return COLLABAT_VERSION; }

std::string report_to_json(const RobustnessReport& report) {
  Json j;
  j["entries"] = Json::array();
  for (const auto& e : report.entries) {
    j["entries"].push_back({{"model", e.model},
                            {"surrogate", e.surrogate},
                            {"attack", e.attack_name},
                            {"config", detail::attack_to_json(e.attack)},
                            {"correct", e.correct},
                            {"count", e.count},
                            {"accuracy", e.accuracy}});
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const RobustnessReport& report) {
  std::ostringstream out;
  out << "model,surrogate,attack,epsilon,step_size,iterations,random_start,objective,correct,"
         "count,accuracy\n";
  char buf[32];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& e : report.entries) {
    out << e.model << ',' << e.surrogate << ',' << e.attack_name << ',' << real(e.attack.epsilon)
        << ',' << real(e.attack.step_size) << ',' << e.attack.iterations << ','
        << (e.attack.random_start ? "true" : "false") << ',' << to_string(e.attack.objective)
        << ',' << e.correct << ',' << e.count << ',' << real(e.accuracy) << '\n';
  }
  return out.str();
}

std::string confusion_to_json(const ConfusionMatrix& confusion, bool zero_diagonal) {
  Json j;
  j["row_model"] = confusion.row_model;
  j["column_model"] = confusion.column_model;
  j["attack"] = confusion.attack_name;
  j["attack_config"] = detail::attack_to_json(confusion.attack);
  j["crafted_by"] = confusion.crafted_by;
  j["diagonal_zeroed_in_csv"] = zero_diagonal;
  j["counts"] = confusion.counts;
  j["total"] = confusion.total();
  j["trace"] = confusion.trace();
  return j.dump(2) + "\n";
}

std::string discrepancy_to_json(const DiscrepancyScore& score, const ConfusionMatrix& confusion) {
  Json j;
  j["first_model"] = confusion.row_model;
  j["second_model"] = confusion.column_model;
  j["attack"] = confusion.attack_name;
  j["crafted_by"] = confusion.crafted_by;
  j["agreements"] = score.agreements;
  j["count"] = score.count;
  j["intersection"] = score.intersection;
  j["discrepancy"] = score.discrepancy;
  return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& manifest) {
  Json j;
  j["config_hash"] = manifest.config_hash;
  j["toolkit_version"] = manifest.toolkit_version;
  j["seed"] = manifest.seed;
  j["wall_clock_seconds"] = manifest.wall_clock_seconds;
  j["artifacts"] = manifest.artifacts;
  return j.dump(2) + "\n";
}

}  // namespace collabat
