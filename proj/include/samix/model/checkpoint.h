// samix/model/checkpoint.h

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

#ifndef SAMIX_MODEL_CHECKPOINT_H_
#define SAMIX_MODEL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "samix/model/params.h"

namespace samix::model {

// On disk: "SAMIXCKP", u32 format version, u64 header length, a JSON header,
// then one little-endian float32 record per tensor in header order. The
// header carries a SHA-256 of the record bytes, checked on load.
struct Checkpoint {
  ModelConfig model;
  std::int64_t step = 0;
  double alpha = 0.5;
  std::string codebook_hash;
  nlohmann::json meta = nlohmann::json::object();
  Params<float> params;
  // Adam moments, present in trainer checkpoints.
  std::optional<Params<float>> adam_m, adam_v;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const std::filesystem::path &path, const Checkpoint &ckpt);

// Throws kCheckpoint on a malformed file, a digest mismatch, or (when
// expected is given) a model config different from *expected.
Checkpoint LoadCheckpoint(const std::filesystem::path &path,
                          const ModelConfig *expected = nullptr);

// SHA-256 over the float32 bytes of every tensor in visit order.
std::string ParamsDigest(const Params<float> &params);

}  // namespace samix::model

#endif  // SAMIX_MODEL_CHECKPOINT_H_
