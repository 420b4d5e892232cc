// samix/model/loss.h

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

#ifndef SAMIX_MODEL_LOSS_H_
#define SAMIX_MODEL_LOSS_H_

#include <array>
#include <cstdint>

#include "samix/common/tensor.h"
#include "samix/labeler/codebook.h"
#include "samix/model/masking.h"

namespace samix::model {

using labeler::PseudoLabelSeq;

struct CrossEntropyResult {
  double ce = 0.0;        // mean over masked frames of -log p(u_t | z_t)
  double accuracy = 0.0;  // argmax hits over masked frames (ties -> lower id)
};

// Masked cross entropy of one head against one label sequence. When d_logits
// is non-null it receives scale * dCE/dZ. Every call bumps a process-wide
// counter (see CrossEntropyEvaluations).
template <typename T>
CrossEntropyResult MaskedCrossEntropy(const Mat<T> &logits, const PseudoLabelSeq &labels,
                                      const MaskSpec &mask, Mat<T> *d_logits = nullptr,
                                      double scale = 1.0);

std::uint64_t CrossEntropyEvaluations();
void ResetCrossEntropyEvaluations();

struct SaLossResult {
  double total = 0.0;
  std::array<double, 2> ce{};
  std::array<double, 2> accuracy{};
};

// Sum over the two slots of the masked cross entropy, slot i scored by head
// i. No permutation search: exactly one pairing is evaluated.
template <typename T>
SaLossResult SaLoss(const Mat<T> &z1, const Mat<T> &z2, const PseudoLabelSeq &labels1,
                    const PseudoLabelSeq &labels2, const MaskSpec &mask, Mat<T> *d_z1 = nullptr,
                    Mat<T> *d_z2 = nullptr, double scale = 1.0);

// Single-slot objective of the baseline (primary speaker only).
template <typename T>
CrossEntropyResult BaselineLoss(const Mat<T> &z, const PseudoLabelSeq &primary_labels,
                                const MaskSpec &mask, Mat<T> *d_z = nullptr, double scale = 1.0);

}  // namespace samix::model

#endif  // SAMIX_MODEL_LOSS_H_
