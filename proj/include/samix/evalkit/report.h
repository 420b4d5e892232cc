// samix/evalkit/report.h

// Copyright 2026  The samix authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SAMIX_EVALKIT_REPORT_H_
#define SAMIX_EVALKIT_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "samix/model/config.h"

namespace samix::evalkit {

struct CheckResult {
  std::string id;
  bool passed = false;
  std::optional<double> value;
  std::optional<double> tolerance;
  std::string details;
  bool required = true;
  double seconds = 0.0;  // wall time spent in the check
};

struct EvalReport {
  std::vector<CheckResult> checks;
  nlohmann::json environment = nlohmann::json::object();

  bool AllRequiredPassed() const;
  const CheckResult *Find(const std::string &id) const;
  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

struct SuiteOptions {
  // Loaded (and digest-verified) when set; fresh parameters otherwise.
  std::optional<std::filesystem::path> checkpoint;
  model::ModelConfig model;
  std::uint64_t seed = 0;
  int mixtures = 200;
  std::string config_hash;
  // Scratch directory for the checkpoint round trip.
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path();
};

// Check ids in report order.
const std::vector<std::string> &InvariantCheckIds();

// Runs every check in InvariantCheckIds(); a failing or throwing check is
// recorded and the suite carries on.
EvalReport RunInvariantSuite(const SuiteOptions &opt);

}  // namespace samix::evalkit

#endif  // SAMIX_EVALKIT_REPORT_H_
