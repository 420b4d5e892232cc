// samix/mixsim/mixture.h

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

#ifndef SAMIX_MIXSIM_MIXTURE_H_
#define SAMIX_MIXSIM_MIXTURE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samix/common/audio.h"
#include "samix/common/rng.h"
#include "samix/mixsim/manifest.h"
#include "samix/mixsim/scenario.h"

namespace samix::mixsim {

// A constituent clip as it sits in the mixture: samples [offset, offset+len)
// of the mixture receive gain * clip.
struct PlacedSource {
  AudioClip clip;
  double gain = 1.0;
  std::size_t offset = 0;

  std::size_t end() const { return offset + clip.size(); }
};

// Noise is stored already tiled to the mixture length.
struct NoiseTrack {
  AudioClip clip;
  double gain = 1.0;
};

struct MixtureSample {
  AudioClip mixture;
  std::vector<PlacedSource> sources;
  std::optional<NoiseTrack> noise;
  ScenarioSpec scenario;
  // Set only by the constrained (baseline) renderer.
  std::optional<std::size_t> primary_index;

  // gain * clip of source i laid out on the mixture timeline.
  std::vector<double> PlacedTrack(std::size_t i) const;
  // Max |mixture - sum of placed sources - scaled noise|.
  double ReconstructionError() const;
  // Number of samples where both sources are present (0 for one source).
  std::size_t OverlapSamples() const;
  // SIR over the overlapped region (full clips when the overlap is empty).
  double MeasuredSirDb() const;
  // Speech-to-noise over the whole mixture.
  double MeasuredSnrDb() const;
};

// Gain g for `other` so that 20 log10(rms(reference) / (g rms(other))) equals
// target_db. Callers pass the region the ratio is defined over.
double GainForRatio(std::span<const double> reference, std::span<const double> other,
                    double target_db);
double GainForRatio(const AudioClip &reference, const AudioClip &other, double target_db);

MixtureSample RenderMixture(const ScenarioSpec &spec, Corpus &corpus, Rng &rng,
                            const SimulationConfig &cfg = {});

// Two-speaker rendering from given clips: the interferer overlaps
// overlap_ratio of the target's duration. Throws kPlacement when that overlap
// is longer than either clip. noise_corpus is only read for noisy kinds.
MixtureSample RenderPair(const ScenarioSpec &spec, AudioClip target, AudioClip interferer,
                         Corpus *noise_corpus, Rng &rng, const SimulationConfig &cfg = {});

// Baseline-objective mixtures: the interferer overlaps strictly less than half
// of the primary and is strictly shorter in the mixture. primary_index == 0.
MixtureSample RenderConstrainedMixture(Corpus &corpus, Rng &rng,
                                       const SimulationConfig &cfg = {});

AudioClip SelectEnrollment(Corpus &corpus, const std::string &speaker_id,
                           const std::string &exclude_utterance_id, Rng &rng);

}  // namespace samix::mixsim

#endif  // SAMIX_MIXSIM_MIXTURE_H_
