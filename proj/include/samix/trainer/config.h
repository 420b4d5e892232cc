// samix/trainer/config.h

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

#ifndef SAMIX_TRAINER_CONFIG_H_
#define SAMIX_TRAINER_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "samix/model/speaker.h"

namespace samix::trainer {

enum class Objective { kSaWavlm, kBaselineWavlm };

std::string_view ObjectiveName(Objective o);
Objective ParseObjective(std::string_view name);

struct TrainConfig {
  std::int64_t steps = 5000;
  double learning_rate = 1e-3;
  std::int64_t warmup_steps = 500;
  int batch_size = 8;
  std::uint64_t seed = 1;
  double alpha = 0.5;
  Objective objective = Objective::kSaWavlm;
  double crop_seconds = 3.0;
  bool shuffle = true;
  std::int64_t checkpoint_every = 500;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Global gradient-norm clip; 0 disables clipping.
  double max_grad_norm = 0.0;
  // 0 draws a fresh mixture for every item. Otherwise items come from a fixed
  // pool of this many mixtures, rendered once; masks and slot order are still
  // redrawn every step.
  int item_pool = 0;
  model::EmbeddingMode embedding_mode = model::EmbeddingMode::kLookup;

  std::size_t crop_samples() const;
  void Validate() const;

  bool operator==(const TrainConfig &) const = default;
};

// Desk-scale defaults with the full-scale learning rate and step count.
TrainConfig PaperScalePreset();

nlohmann::json ToJson(const TrainConfig &cfg);
// Missing keys take defaults; unknown keys and type mismatches are rejected
// with the offending path ("trainer.<key>").
TrainConfig TrainConfigFromJson(const nlohmann::json &j);

}  // namespace samix::trainer

#endif  // SAMIX_TRAINER_CONFIG_H_
