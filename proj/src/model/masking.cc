// samix/model/masking.cc

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

#include "samix/model/masking.h"

#include <algorithm>

#include "samix/common/error.h"

namespace samix::model {

MaskSpec MaskSpec::FromIndices(int frames, std::vector<int> indices) {
  MaskSpec m;
  m.frames = frames;
  m.is_masked.assign(std::size_t(std::max(frames, 0)), 0);
  for (int t : indices) {
    if (t < 0 || t >= frames)
      Fail(ErrorKind::kShape, "mask index " + std::to_string(t) + " outside [0, " +
                                  std::to_string(frames) + ")");
    m.is_masked[std::size_t(t)] = 1;
  }
  for (int t = 0; t < frames; ++t)
    if (m.is_masked[std::size_t(t)]) m.indices.push_back(t);
  return m;
}

MaskSpec SampleMask(int frames, double start_prob, int span, Rng &rng) {
  if (span <= 0) Fail(ErrorKind::kConfig, "mask_span must be positive");
  if (!(start_prob >= 0.0 && start_prob <= 1.0))
    Fail(ErrorKind::kConfig, "mask_start_prob outside [0, 1]");
  MaskSpec m;
  m.frames = frames;
  m.is_masked.assign(std::size_t(frames), 0);
  for (int t = 0; t < frames; ++t) {
    if (!Bernoulli(rng, start_prob)) continue;
    for (int s = t; s < std::min(frames, t + span); ++s) m.is_masked[std::size_t(s)] = 1;
  }
  for (int t = 0; t < frames; ++t)
    if (m.is_masked[std::size_t(t)]) m.indices.push_back(t);
  return m;
}

template <typename T>
Mat<T> ApplyMask(const Mat<T> &features, const MaskSpec &mask, const Mat<T> &mask_embedding) {
  if (features.rows() != mask.frames)
    Fail(ErrorKind::kShape, "mask covers " + std::to_string(mask.frames) + " frames, features have " +
                                std::to_string(features.rows()));
  if (mask_embedding.cols() != features.cols())
    Fail(ErrorKind::kShape, "mask embedding width does not match features");
  Mat<T> out = features;
  for (int t : mask.indices) out.row(t) = mask_embedding.row(0);
  return out;
}

template <typename T>
Mat<T> ApplyMaskBackward(const MaskSpec &mask, const Mat<T> &d_masked, Mat<T> *d_mask_embedding) {
  Mat<T> d = d_masked;
  for (int t : mask.indices) {
    if (d_mask_embedding) *d_mask_embedding += d.row(t);
    d.row(t).setZero();
  }
  return d;
}

template Mat<float> ApplyMask(const Mat<float> &, const MaskSpec &, const Mat<float> &);
template Mat<double> ApplyMask(const Mat<double> &, const MaskSpec &, const Mat<double> &);
template Mat<float> ApplyMaskBackward(const MaskSpec &, const Mat<float> &, Mat<float> *);
template Mat<double> ApplyMaskBackward(const MaskSpec &, const Mat<double> &, Mat<double> *);

}  // namespace samix::model
