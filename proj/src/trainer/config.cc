// samix/trainer/config.cc

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

#include "samix/trainer/config.h"

#include <cmath>
#include <set>

#include "samix/common/audio.h"
#include "samix/common/error.h"

namespace samix::trainer {

std::string_view ObjectiveName(Objective o) {
  return o == Objective::kSaWavlm ? "sa_wavlm" : "baseline_wavlm";
}

Objective ParseObjective(std::string_view name) {
  if (name == "sa_wavlm") return Objective::kSaWavlm;
  if (name == "baseline_wavlm") return Objective::kBaselineWavlm;
  Fail(ErrorKind::kConfig, "trainer.objective: unknown objective '" + std::string(name) + "'");
}

std::size_t TrainConfig::crop_samples() const {
  return std::size_t(std::llround(crop_seconds * kSampleRate));
}

void TrainConfig::Validate() const {
  auto bad = [](const std::string &what) { Fail(ErrorKind::kConfig, "trainer." + what); };
  if (steps < 0) bad("steps must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    bad("learning_rate must be finite and >= 0");
  if (warmup_steps < 0 || warmup_steps > steps) bad("warmup_steps must lie in [0, steps]");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) bad("alpha must lie in [0, 1]");
  if (!(crop_seconds > 0.0) || !std::isfinite(crop_seconds)) bad("crop_seconds must be positive");
  if (checkpoint_every < 1) bad("checkpoint_every must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) bad("adam_beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) bad("adam_beta2 must lie in [0, 1)");
  if (!(adam_epsilon > 0.0)) bad("adam_epsilon must be positive");
  if (!(max_grad_norm >= 0.0)) bad("max_grad_norm must be >= 0");
  if (item_pool < 0) bad("item_pool must be >= 0");
}

TrainConfig PaperScalePreset() {
  TrainConfig c;
  c.learning_rate = 7e-5;
  c.steps = 400000;
  c.warmup_steps = 32000;
  return c;
}

nlohmann::json ToJson(const TrainConfig &c) {
  return {{"steps", c.steps},
          {"learning_rate", c.learning_rate},
          {"warmup_steps", c.warmup_steps},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"alpha", c.alpha},
          {"objective", ObjectiveName(c.objective)},
          {"crop_seconds", c.crop_seconds},
          {"shuffle", c.shuffle},
          {"checkpoint_every", c.checkpoint_every},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"max_grad_norm", c.max_grad_norm},
          {"item_pool", c.item_pool},
          {"embedding_mode", model::EmbeddingModeName(c.embedding_mode)}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json &j) {
  if (!j.is_object()) Fail(ErrorKind::kConfig, "trainer: expected an object");
  static const std::set<std::string> known = {
      "steps",        "learning_rate", "warmup_steps",     "batch_size",   "seed",
      "alpha",        "objective",     "crop_seconds",     "shuffle",      "checkpoint_every",
      "adam_beta1",   "adam_beta2",    "adam_epsilon",     "max_grad_norm", "item_pool",
      "embedding_mode"};
  for (const auto &[key, value] : j.items())
    if (!known.count(key)) Fail(ErrorKind::kConfig, "unknown key 'trainer." + key + "'");
  TrainConfig c;
  auto get = [&](const char *key, auto &field) {
    if (!j.contains(key)) return;
    const auto &v = j.at(key);
    using F = std::decay_t<decltype(field)>;
    bool ok;
    if constexpr (std::is_same_v<F, bool>) ok = v.is_boolean();
    else if constexpr (std::is_integral_v<F>) ok = v.is_number_integer();
    else if constexpr (std::is_floating_point_v<F>) ok = v.is_number();
    else ok = v.is_string();
    if (!ok) Fail(ErrorKind::kConfig, std::string("type mismatch at 'trainer.") + key + "'");
    v.get_to(field);
  };
  std::string objective(ObjectiveName(c.objective));
  std::string mode(model::EmbeddingModeName(c.embedding_mode));
  get("steps", c.steps);
  get("learning_rate", c.learning_rate);
  get("warmup_steps", c.warmup_steps);
  get("batch_size", c.batch_size);
  get("seed", c.seed);
  get("alpha", c.alpha);
  get("objective", objective);
  get("crop_seconds", c.crop_seconds);
  get("shuffle", c.shuffle);
  get("checkpoint_every", c.checkpoint_every);
  get("adam_beta1", c.adam_beta1);
  get("adam_beta2", c.adam_beta2);
  get("adam_epsilon", c.adam_epsilon);
  get("max_grad_norm", c.max_grad_norm);
  get("item_pool", c.item_pool);
  get("embedding_mode", mode);
  c.objective = ParseObjective(objective);
  try {
    c.embedding_mode = model::ParseEmbeddingMode(mode);
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, std::string("trainer.embedding_mode: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace samix::trainer
