// samix/common/audio.h

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

#ifndef SAMIX_COMMON_AUDIO_H_
#define SAMIX_COMMON_AUDIO_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace samix {

inline constexpr int kSampleRate = 16000;

struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
  std::string speaker_id;
  std::string utterance_id;

  std::size_t size() const { return samples.size(); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws kValidation if the clip breaks the AudioClip invariants
// (16 kHz, finite, non-empty).
void ValidateClip(const AudioClip &clip);

double Rms(std::span<const double> x);

enum class WavEncoding { kPcm16, kFloat32 };

// Mono 16 kHz only; anything else is a kFormat error.
AudioClip ReadWav(const std::filesystem::path &path);
void WriteWav(const std::filesystem::path &path, const AudioClip &clip,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace samix

#endif  // SAMIX_COMMON_AUDIO_H_
