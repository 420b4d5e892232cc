// samix/cli/run_config.h

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

#ifndef SAMIX_CLI_RUN_CONFIG_H_
#define SAMIX_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "samix/evalkit/probe.h"
#include "samix/labeler/features.h"
#include "samix/mixsim/manifest.h"
#include "samix/mixsim/scenario.h"
#include "samix/mixsim/synthetic.h"
#include "samix/model/config.h"
#include "samix/trainer/config.h"

namespace samix::cli {

// Without a speech manifest the synthetic corpus is generated in memory.
struct DataConfig {
  std::optional<std::filesystem::path> speech_manifest;
  std::optional<std::filesystem::path> noise_manifest;
  mixsim::SyntheticCorpusConfig synthetic;
};

struct LabelerConfig {
  int K = 32;
  std::uint64_t seed = 0;
  // Reused instead of refitting when set.
  std::optional<std::filesystem::path> codebook;
  labeler::FeatureConfig features;
};

struct EvalConfig {
  std::uint64_t seed = 11;
  int items = 100;
  double crop_seconds = 1.0;
  int mixtures = 200;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> baseline_checkpoint;
  evalkit::ProbeConfig probe;
  bool export_representations = false;
};

struct RunConfig {
  DataConfig data;
  mixsim::SimulationConfig simulation;
  LabelerConfig labeler;
  model::ModelConfig model;
  trainer::TrainConfig trainer;
  EvalConfig eval;
  // SHA-256 of the canonical, defaults-filled document.
  std::string config_hash;
};

// Schema check, defaults, per-section invariants and cross-section
// consistency. Errors are kConfig and name the offending path.
RunConfig ValidateConfig(const nlohmann::json &document);

// Canonical defaults-filled document; ValidateConfig(ToJson(c)) == c.
nlohmann::json ToJson(const RunConfig &c);

nlohmann::json ToJson(const mixsim::SimulationConfig &c);
nlohmann::json ToJson(const mixsim::SyntheticCorpusConfig &c);

// "a.b.c=value". The value is read as JSON when it parses, as a string
// otherwise; only scalar leaves can be set.
void ApplyOverride(nlohmann::json &document, const std::string &assignment);

// Reads the file, applies overrides and an optional seed (trainer, labeler
// and eval seeds), then validates.
RunConfig LoadRunConfig(const std::filesystem::path &path,
                        const std::vector<std::string> &overrides,
                        std::optional<std::uint64_t> seed);

mixsim::Corpus LoadCorpus(const DataConfig &data);

}  // namespace samix::cli

#endif  // SAMIX_CLI_RUN_CONFIG_H_
