// samix/model/encoder.cc

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

#include "samix/model/encoder.h"

#include "samix/common/error.h"

namespace samix::model {

template <typename T>
Mat<T> EncodeFrames(const Params<T> &p, const ModelConfig &cfg, std::span<const double> samples,
                    EncoderCache<T> *cache) {
  if (samples.size() < std::size_t(cfg.receptive_field()))
    Fail(ErrorKind::kTooShort, "input of " + std::to_string(samples.size()) +
                                   " samples is shorter than the receptive field (" +
                                   std::to_string(cfg.receptive_field()) + ")");
  const int pad = cfg.receptive_field() - cfg.total_stride();
  const int left = pad / 2;
  Mat<T> x = Mat<T>::Zero(Eigen::Index(samples.size()) + pad, 1);
  for (std::size_t n = 0; n < samples.size(); ++n) x(Eigen::Index(n) + left, 0) = T(samples[n]);

  if (cache) cache->conv.resize(cfg.conv_kernels.size());
  for (std::size_t i = 0; i < cfg.conv_kernels.size(); ++i)
    x = ConvForward(p.encoder.conv_w[i], p.encoder.conv_b[i], x, cfg.conv_kernels[i],
                    cfg.conv_strides[i], cache ? &cache->conv[i] : nullptr);
  Mat<T> normed = NormForward(p.encoder.feature_norm, x, static_cast<const Mat<T> *>(nullptr),
                              cfg.norm_epsilon, cache ? &cache->norm : nullptr);
  Mat<T> out = LinearForward(p.encoder.proj, normed);
  if (cache) cache->normed = std::move(normed);
  return out;
}

template <typename T>
FrameFeatures<T> EncodeFrames(const Params<T> &p, const ModelConfig &cfg, const AudioClip &audio) {
  if (audio.sample_rate != kSampleRate) Fail(ErrorKind::kFormat, "encoder needs 16 kHz audio");
  return {EncodeFrames(p, cfg, std::span<const double>(audio.samples)), false};
}

template <typename T>
void EncodeFramesBackward(const Params<T> &p, const ModelConfig &cfg, const EncoderCache<T> &c,
                          const Mat<T> &d_frames, Params<T> *grads) {
  Mat<T> d = LinearBackward(p.encoder.proj, c.normed, d_frames, grads ? &grads->encoder.proj : nullptr);
  d = NormBackward(p.encoder.feature_norm, c.norm, d, grads ? &grads->encoder.feature_norm : nullptr,
                   static_cast<Mat<T> *>(nullptr));
  for (std::size_t i = cfg.conv_kernels.size(); i-- > 0;)
    d = ConvBackward(p.encoder.conv_w[i], c.conv[i], d, cfg.conv_kernels[i], cfg.conv_strides[i],
                     grads ? &grads->encoder.conv_w[i] : nullptr,
                     grads ? &grads->encoder.conv_b[i] : nullptr, i > 0);
}

template Mat<float> EncodeFrames(const Params<float> &, const ModelConfig &, std::span<const double>,
                                 EncoderCache<float> *);
template Mat<double> EncodeFrames(const Params<double> &, const ModelConfig &,
                                  std::span<const double>, EncoderCache<double> *);
template FrameFeatures<float> EncodeFrames(const Params<float> &, const ModelConfig &,
                                           const AudioClip &);
template FrameFeatures<double> EncodeFrames(const Params<double> &, const ModelConfig &,
                                            const AudioClip &);
template void EncodeFramesBackward(const Params<float> &, const ModelConfig &,
                                   const EncoderCache<float> &, const Mat<float> &, Params<float> *);
template void EncodeFramesBackward(const Params<double> &, const ModelConfig &,
                                   const EncoderCache<double> &, const Mat<double> &,
                                   Params<double> *);

}  // namespace samix::model
