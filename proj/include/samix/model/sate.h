// samix/model/sate.h

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

#ifndef SAMIX_MODEL_SATE_H_
#define SAMIX_MODEL_SATE_H_

#include <utility>
#include <vector>

#include "samix/model/ops.h"

namespace samix::model {

enum class RepOrigin { kPerSpeaker, kMerged };

template <typename T>
struct ContextualReps {
  Mat<T> values;  // T x D
  RepOrigin origin = RepOrigin::kPerSpeaker;
};

template <typename T>
struct SateCache {
  PosConvCache<T> pos;
  std::vector<LayerCache<T>> layers;
};

// Speaker-adapted encoder: positional convolution, then layer_count blocks of
// which block satl_layer_index is conditioned on `embedding`. With a null
// embedding every block is a plain layer (baseline encoder). When `hidden` is
// non-null it receives the positional-convolution output followed by every
// block output (layer_count + 1 matrices).
template <typename T>
Mat<T> SateExtract(const Params<T> &p, const ModelConfig &cfg, const Mat<T> &masked_features,
                   const Mat<T> *embedding, SateCache<T> *cache = nullptr,
                   std::vector<Mat<T>> *hidden = nullptr);

// Returns d(masked_features); adds the embedding gradient to d_embedding.
template <typename T>
Mat<T> SateBackward(const Params<T> &p, const ModelConfig &cfg, const SateCache<T> &cache,
                    const Mat<T> &d_output, Params<T> *grads, Mat<T> *d_embedding);

template <typename T>
struct MergeCache {
  Mat<T> concat;
  LayerCache<T> layer;
};

// C^m = Layer(Linear(Concat(first, second))), concatenated along features in
// argument order.
template <typename T>
Mat<T> SmbMerge(const Params<T> &p, const ModelConfig &cfg, const Mat<T> &first,
                const Mat<T> &second, MergeCache<T> *cache = nullptr);

template <typename T>
std::pair<Mat<T>, Mat<T>> SmbMergeBackward(const Params<T> &p, const ModelConfig &cfg,
                                           const MergeCache<T> &cache, const Mat<T> &d_merged,
                                           Params<T> *grads);

// Head 1 scores the first concatenated slot, head 2 the second.
template <typename T>
std::pair<Mat<T>, Mat<T>> PredictHeads(const Params<T> &p, const Mat<T> &merged);

template <typename T>
Mat<T> PredictHeadsBackward(const Params<T> &p, const Mat<T> &merged, const Mat<T> *d_z1,
                            const Mat<T> *d_z2, Params<T> *grads);

// Rejects a codebook whose vocabulary (K + 1) differs from the model's.
void CheckVocabulary(const ModelConfig &cfg, int codebook_vocabulary);

}  // namespace samix::model

#endif  // SAMIX_MODEL_SATE_H_
