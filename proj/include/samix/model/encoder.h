// samix/model/encoder.h

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

#ifndef SAMIX_MODEL_ENCODER_H_
#define SAMIX_MODEL_ENCODER_H_

#include <span>
#include <vector>

#include "samix/common/audio.h"
#include "samix/model/ops.h"

namespace samix::model {

template <typename T>
struct FrameFeatures {
  Mat<T> values;  // T x D
  bool masked = false;
};

template <typename T>
struct EncoderCache {
  std::vector<ConvCache<T>> conv;
  NormCache<T> norm;
  Mat<T> normed;
};

// Strided convolution stack (total stride 320), feature layer norm and a
// projection to D. The waveform is zero-padded so the frame count is
// floor(samples / 320).
template <typename T>
Mat<T> EncodeFrames(const Params<T> &p, const ModelConfig &cfg, std::span<const double> samples,
                    EncoderCache<T> *cache = nullptr);

template <typename T>
FrameFeatures<T> EncodeFrames(const Params<T> &p, const ModelConfig &cfg, const AudioClip &audio);

template <typename T>
void EncodeFramesBackward(const Params<T> &p, const ModelConfig &cfg, const EncoderCache<T> &cache,
                          const Mat<T> &d_frames, Params<T> *grads);

}  // namespace samix::model

#endif  // SAMIX_MODEL_ENCODER_H_
