// samix/model/shuffle.cc

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

#include "samix/model/shuffle.h"

#include <utility>

#include "samix/common/error.h"

namespace samix::model {

ShuffleOutcome ShuffleSlots(mixsim::ScenarioKind kind, std::vector<SpeakerSlot> real_slots,
                            Rng &rng, double alpha, const RowVec<double> &non_speaker,
                            const labeler::Codebook &codebook,
                            const std::vector<SpeakerEmbedding> &distractor_pool, bool shuffle) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) Fail(ErrorKind::kConfig, "alpha outside [0, 1]");
  const std::size_t expected = mixsim::IsTwoSpeaker(kind) ? 2 : 1;
  if (real_slots.size() != expected)
    Fail(ErrorKind::kShape, "scenario '" + std::string(mixsim::ScenarioKindName(kind)) +
                                "' needs " + std::to_string(expected) + " real slots, got " +
                                std::to_string(real_slots.size()));
  ShuffleOutcome out;
  out.slots[0] = std::move(real_slots[0]);
  if (expected == 2) {
    out.slots[1] = std::move(real_slots[1]);
  } else {
    const int frames = int(out.slots[0].labels.size());
    SpeakerSlot absent;
    if (Bernoulli(rng, alpha)) {
      if (distractor_pool.empty())
        Fail(ErrorKind::kSampling, "distractor drawn but the distractor pool is empty");
      absent.embedding = distractor_pool[UniformIndex(rng, distractor_pool.size())];
      absent.embedding.kind = EmbeddingKind::kDistractor;
    } else {
      absent.embedding = NonSpeakerEmbedding(non_speaker);
    }
    absent.labels = labeler::SilenceLabels(frames, codebook);
    out.slots[1] = std::move(absent);
  }
  if (shuffle && Bernoulli(rng, 0.5)) {
    std::swap(out.slots[0], out.slots[1]);
    out.swapped = true;
  }
  return out;
}

}  // namespace samix::model
