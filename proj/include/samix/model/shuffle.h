// samix/model/shuffle.h

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

#ifndef SAMIX_MODEL_SHUFFLE_H_
#define SAMIX_MODEL_SHUFFLE_H_

#include <array>
#include <vector>

#include "samix/common/rng.h"
#include "samix/labeler/codebook.h"
#include "samix/mixsim/scenario.h"
#include "samix/model/speaker.h"

namespace samix::model {

struct SpeakerSlot {
  SpeakerEmbedding embedding;
  labeler::PseudoLabelSeq labels;
};

using SlotPair = std::array<SpeakerSlot, 2>;

struct ShuffleOutcome {
  SlotPair slots;
  bool swapped = false;
};

// Builds the ordered slot pair for one item. One-speaker kinds get a second
// slot carrying silence labels: a distractor drawn from distractor_pool with
// probability alpha, otherwise the non-speaker embedding. The pair order is
// then swapped with probability 1/2 when `shuffle` is set; embeddings and
// labels always move together.
ShuffleOutcome ShuffleSlots(mixsim::ScenarioKind kind, std::vector<SpeakerSlot> real_slots,
                            Rng &rng, double alpha, const RowVec<double> &non_speaker,
                            const labeler::Codebook &codebook,
                            const std::vector<SpeakerEmbedding> &distractor_pool,
                            bool shuffle = true);

}  // namespace samix::model

#endif  // SAMIX_MODEL_SHUFFLE_H_
