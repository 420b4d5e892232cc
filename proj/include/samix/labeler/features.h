// samix/labeler/features.h

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

#ifndef SAMIX_LABELER_FEATURES_H_
#define SAMIX_LABELER_FEATURES_H_

#include <json.hpp>

#include "samix/common/audio.h"
#include "samix/common/tensor.h"

namespace samix::labeler {

struct FeatureConfig {
  int window = 400;  // 25 ms
  int hop = 320;     // 20 ms
  int fft_size = 512;
  int mel_bins = 40;
  int cepstra = 13;
  double low_hz = 20.0;
  double high_hz = 8000.0;
  double preemphasis = 0.97;
  double log_floor = 1e-10;
  int delta_window = 2;

  int dim() const { return 3 * cepstra; }
  double frame_rate() const { return double(kSampleRate) / hop; }
  int FrameCount(std::size_t samples) const;
  void Validate() const;

  bool operator==(const FeatureConfig &) const = default;
};

nlohmann::json ToJson(const FeatureConfig &cfg);
FeatureConfig FeatureConfigFromJson(const nlohmann::json &j);

// MFCC + delta + delta-delta, one row per frame.
MatD FrameSpectralFeatures(const AudioClip &audio, const FeatureConfig &cfg = {});

}  // namespace samix::labeler

#endif  // SAMIX_LABELER_FEATURES_H_
