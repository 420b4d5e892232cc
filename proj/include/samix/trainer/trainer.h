// samix/trainer/trainer.h

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

#ifndef SAMIX_TRAINER_TRAINER_H_
#define SAMIX_TRAINER_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "samix/model/checkpoint.h"
#include "samix/trainer/data.h"

namespace samix::trainer {

struct AdamState {
  model::Params<float> m, v;
  std::int64_t t = 0;
};

AdamState MakeAdamState(const model::ModelConfig &cfg);

// Linear warmup to cfg.learning_rate over warmup_steps, then linear decay to
// zero at cfg.steps. Steps are 1-based.
double LearningRate(const TrainConfig &cfg, std::int64_t step);

struct StepMetrics {
  std::int64_t step = 0;
  double loss = 0.0;
  // Baseline runs fill only the first entries.
  std::array<double, 2> ce{};
  std::array<double, 2> accuracy{};
  bool two_slots = true;
  double grad_norm = 0.0;
  double lr = 0.0;
};

nlohmann::json ToJson(const StepMetrics &m);

// Mean objective over the batch and its gradient, without updating.
StepMetrics BatchGradient(const Batch &batch, const model::Params<float> &params,
                          const model::ModelConfig &model_cfg, Objective objective,
                          model::Params<float> &grads);

// One optimizer step at learning rate `lr`. Throws kNumeric (listing the
// batch items) when the loss or gradient is not finite.
StepMetrics TrainStep(const Batch &batch, model::Params<float> &params, AdamState &opt,
                      const model::ModelConfig &model_cfg, const TrainConfig &cfg, double lr);

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> resume_from;
  // Stop after this step (inclusive) and checkpoint there.
  std::optional<std::int64_t> stop_at;
  std::string config_hash;
  bool write_log = true;
};

struct RunResult {
  std::filesystem::path final_checkpoint;
  std::vector<StepMetrics> metrics;
  model::Params<float> params;
};

std::filesystem::path CheckpointPath(const std::filesystem::path &dir, std::int64_t step);

// Trains from InitParams(model, seed) or from a resume checkpoint whose model
// config, trainer config and codebook match. Writes checkpoint files every
// checkpoint_every steps and at the end, and appends metrics.ndjson.
RunResult RunPretraining(const TrainConfig &cfg, const DataContext &ctx, const RunOptions &opt);

std::uint64_t InitSeed(const TrainConfig &cfg);

}  // namespace samix::trainer

#endif  // SAMIX_TRAINER_TRAINER_H_
