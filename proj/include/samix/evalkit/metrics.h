// samix/evalkit/metrics.h

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

#ifndef SAMIX_EVALKIT_METRICS_H_
#define SAMIX_EVALKIT_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "samix/common/audio.h"
#include "samix/common/tensor.h"
#include "samix/labeler/codebook.h"
#include "samix/model/masking.h"

namespace samix::evalkit {

// Fraction of masked frames whose argmax (ties to the lower class) equals the
// label; nullopt when the mask is empty.
template <typename T>
std::optional<double> MaskedAccuracy(const Mat<T> &logits, const labeler::PseudoLabelSeq &labels,
                                     const model::MaskSpec &mask);

inline constexpr double kSiSdrCapDb = 80.0;

// Scale-invariant SDR in dB, capped at kSiSdrCapDb.
double SiSdr(std::span<const double> estimate, std::span<const double> reference);
double SiSdr(const AudioClip &estimate, const AudioClip &reference);

// sum_l weights[l] * reps[l]. Weights must be nonnegative and sum to 1.
MatD LayerWeightedSum(const std::vector<MatD> &reps, const std::vector<double> &weights);

// Mean over frames of the total-variation distance between matching rows.
double MeanTotalVariation(const MatD &p, const MatD &q);

}  // namespace samix::evalkit

#endif  // SAMIX_EVALKIT_METRICS_H_
