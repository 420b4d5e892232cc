// samix/evalkit/metrics.cc

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

#include "samix/evalkit/metrics.h"

#include <cmath>

#include "samix/common/error.h"

namespace samix::evalkit {

template <typename T>
std::optional<double> MaskedAccuracy(const Mat<T> &logits, const labeler::PseudoLabelSeq &labels,
                                     const model::MaskSpec &mask) {
  if (Eigen::Index(labels.size()) != logits.rows() || mask.frames != logits.rows())
    Fail(ErrorKind::kShape, "masked accuracy: logits, labels and mask disagree on frame count");
  if (mask.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (int t : mask.indices) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(t, c) > logits(t, best)) best = c;
    if (best == labels.labels[std::size_t(t)]) ++hits;
  }
  return double(hits) / double(mask.size());
}

double SiSdr(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size())
    Fail(ErrorKind::kShape, "si_sdr needs equal lengths (" + std::to_string(estimate.size()) +
                                " vs " + std::to_string(reference.size()) + ")");
  double rr = 0.0, er = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    rr += reference[n] * reference[n];
    er += estimate[n] * reference[n];
  }
  if (!(rr > 0.0)) Fail(ErrorKind::kDegenerateSignal, "si_sdr reference is silent");
  const double alpha = er / rr;
  double target = 0.0, residual = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double s = alpha * reference[n];
    const double e = estimate[n] - s;
    target += s * s;
    residual += e * e;
  }
  if (residual <= 0.0 || target <= 0.0)
    return target > 0.0 ? kSiSdrCapDb : -kSiSdrCapDb;
  return std::clamp(10.0 * std::log10(target / residual), -kSiSdrCapDb, kSiSdrCapDb);
}

double SiSdr(const AudioClip &estimate, const AudioClip &reference) {
  return SiSdr(std::span<const double>(estimate.samples),
               std::span<const double>(reference.samples));
}

MatD LayerWeightedSum(const std::vector<MatD> &reps, const std::vector<double> &weights) {
  if (reps.empty() || weights.size() != reps.size())
    Fail(ErrorKind::kShape, "layer_weighted_sum: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(reps.size()) + " layers");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) Fail(ErrorKind::kShape, "layer_weighted_sum: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    Fail(ErrorKind::kShape, "layer_weighted_sum: weights sum to " + std::to_string(sum));
  MatD out = MatD::Zero(reps[0].rows(), reps[0].cols());
  for (std::size_t l = 0; l < reps.size(); ++l) {
    if (reps[l].rows() != out.rows() || reps[l].cols() != out.cols())
      Fail(ErrorKind::kShape, "layer_weighted_sum: layer shapes differ");
    out += weights[l] * reps[l];
  }
  return out;
}

double MeanTotalVariation(const MatD &p, const MatD &q) {
  if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() == 0)
    Fail(ErrorKind::kShape, "total variation needs equal, non-empty shapes");
  return 0.5 * (p - q).cwiseAbs().rowwise().sum().mean();
}

template std::optional<double> MaskedAccuracy(const Mat<float> &, const labeler::PseudoLabelSeq &,
                                              const model::MaskSpec &);
template std::optional<double> MaskedAccuracy(const Mat<double> &, const labeler::PseudoLabelSeq &,
                                              const model::MaskSpec &);

}  // namespace samix::evalkit
