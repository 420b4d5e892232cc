// samix/mixsim/synthetic.h

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

#ifndef SAMIX_MIXSIM_SYNTHETIC_H_
#define SAMIX_MIXSIM_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>

#include "samix/mixsim/manifest.h"

namespace samix::mixsim {

// Artificial "speakers": each owns a disjoint frequency band and a small
// inventory of tone-complex units that it cycles through in a fixed order, so
// frame identities are predictable from context and separable by band.
struct SyntheticCorpusConfig {
  int speakers = 4;
  int utterances_per_speaker = 8;
  int units_per_speaker = 4;
  double min_seconds = 1.0;
  double max_seconds = 1.5;
  double min_unit_seconds = 0.24;
  double max_unit_seconds = 0.40;
  int noise_clips = 4;
  double noise_seconds = 2.0;
  std::uint64_t seed = 7;
};

Corpus MakeSyntheticCorpus(const SyntheticCorpusConfig &cfg);

// Writes every clip as 32-bit float WAV plus speech.tsv / noise.tsv manifests.
void WriteCorpus(Corpus &corpus, const std::filesystem::path &dir);

}  // namespace samix::mixsim

#endif  // SAMIX_MIXSIM_SYNTHETIC_H_
