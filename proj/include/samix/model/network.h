// samix/model/network.h

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

#ifndef SAMIX_MODEL_NETWORK_H_
#define SAMIX_MODEL_NETWORK_H_

#include <span>
#include <utility>
#include <vector>

#include "samix/model/loss.h"
#include "samix/model/sate.h"
#include "samix/model/shuffle.h"

// Whole-item passes built from the blocks in ops/encoder/sate/loss:
// encode -> mask -> extract (once per slot) -> merge -> predict.
namespace samix::model {

// The conditioning vector a slot injects: e^s for non-speaker slots, the
// embedding's own vector otherwise.
template <typename T>
Mat<T> SlotVector(const Params<T> &p, const SpeakerEmbedding &e);

// Loss of one item under the extract-merge-predict objective. With grads
// non-null the parameter gradients times `scale` are added into it.
template <typename T>
SaLossResult SaItemLoss(const Params<T> &p, const ModelConfig &cfg, std::span<const double> mixture,
                        const MaskSpec &mask, const SlotPair &slots, Params<T> *grads = nullptr,
                        double scale = 1.0);

// Baseline objective: unconditioned encoder, no merge, head 1 only.
template <typename T>
CrossEntropyResult BaselineItemLoss(const Params<T> &p, const ModelConfig &cfg,
                                    std::span<const double> mixture, const MaskSpec &mask,
                                    const PseudoLabelSeq &primary_labels,
                                    Params<T> *grads = nullptr, double scale = 1.0);

// Unmasked inference: (Z^1, Z^2) for slot order (first, second).
template <typename T>
std::pair<Mat<T>, Mat<T>> PredictPair(const Params<T> &p, const ModelConfig &cfg,
                                      std::span<const double> mixture,
                                      const SpeakerEmbedding &first,
                                      const SpeakerEmbedding &second);

// Extract-only mode: every hidden representation of the unmasked mixture
// (layer_count + 1 matrices). A null embedding runs all layers unconditioned.
template <typename T>
std::vector<Mat<T>> ExtractLayers(const Params<T> &p, const ModelConfig &cfg,
                                  std::span<const double> mixture,
                                  const SpeakerEmbedding *embedding);

template <typename T>
Mat<T> RowSoftmax(const Mat<T> &logits);

}  // namespace samix::model

#endif  // SAMIX_MODEL_NETWORK_H_
