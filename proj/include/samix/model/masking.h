// samix/model/masking.h

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

#ifndef SAMIX_MODEL_MASKING_H_
#define SAMIX_MODEL_MASKING_H_

#include <utility>
#include <vector>

#include "samix/common/rng.h"
#include "samix/common/tensor.h"
#include "samix/model/config.h"

namespace samix::model {

// The masked frame set O, 0-based and sorted.
struct MaskSpec {
  int frames = 0;
  std::vector<int> indices;
  std::vector<char> is_masked;  // frames entries, 1 when in O

  bool Contains(int t) const { return is_masked[std::size_t(t)] != 0; }
  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  static MaskSpec FromIndices(int frames, std::vector<int> indices);
};

// Every frame independently starts a span of `span` frames with probability
// start_prob; spans are clipped at the end and unioned.
MaskSpec SampleMask(int frames, double start_prob, int span, Rng &rng);

template <typename T>
Mat<T> ApplyMask(const Mat<T> &features, const MaskSpec &mask, const Mat<T> &mask_embedding);

template <typename T>
std::pair<Mat<T>, MaskSpec> ApplyRandomMask(const Mat<T> &features, Rng &rng,
                                            const ModelConfig &cfg, const Mat<T> &mask_embedding) {
  MaskSpec mask = SampleMask(int(features.rows()), cfg.mask_start_prob, cfg.mask_span, rng);
  return {ApplyMask(features, mask, mask_embedding), std::move(mask)};
}

// Returns d(features); masked rows feed d_mask_embedding instead.
template <typename T>
Mat<T> ApplyMaskBackward(const MaskSpec &mask, const Mat<T> &d_masked, Mat<T> *d_mask_embedding);

}  // namespace samix::model

#endif  // SAMIX_MODEL_MASKING_H_
