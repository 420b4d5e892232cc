// samix/model/speaker.h

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

#ifndef SAMIX_MODEL_SPEAKER_H_
#define SAMIX_MODEL_SPEAKER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "samix/common/audio.h"
#include "samix/common/tensor.h"
#include "samix/model/params.h"

namespace samix::model {

enum class EmbeddingKind { kReal, kDistractor, kNonSpeaker };

std::string_view EmbeddingKindName(EmbeddingKind kind);

// Unit-norm for kReal / kDistractor. A kNonSpeaker embedding is a
// placeholder: the network substitutes the learnable non_speaker parameter.
struct SpeakerEmbedding {
  RowVec<double> vector;
  EmbeddingKind kind = EmbeddingKind::kReal;
  std::optional<std::string> speaker_id;
};

enum class EmbeddingMode { kLookup, kEnrollmentMean };

EmbeddingMode ParseEmbeddingMode(std::string_view name);
std::string_view EmbeddingModeName(EmbeddingMode mode);

// Deterministic unit vector derived from the speaker id (and salt).
SpeakerEmbedding LookupEmbedding(const std::string &speaker_id, int dim, std::uint64_t salt = 0);

// L2-normalized mean encoder frame of the enrollment clip, mapped to E
// dimensions by a fixed projection derived from projection_seed.
template <typename T>
SpeakerEmbedding EnrollmentEmbedding(const AudioClip &enrollment, const Params<T> &params,
                                     const ModelConfig &cfg, std::uint64_t projection_seed = 0);

SpeakerEmbedding NonSpeakerEmbedding(const RowVec<double> &e_s);

// Lookup embeddings for a speaker set. The salt is bumped until every pair
// has cosine similarity below max_cosine.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(const std::vector<std::string> &speakers, int dim, double max_cosine = 0.99);

  const SpeakerEmbedding &at(const std::string &speaker_id) const;
  std::vector<SpeakerEmbedding> Except(const std::string &speaker_id) const;
  std::uint64_t salt() const { return salt_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, SpeakerEmbedding> table_;
  std::uint64_t salt_ = 0;
};

}  // namespace samix::model

#endif  // SAMIX_MODEL_SPEAKER_H_
