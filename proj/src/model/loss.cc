// samix/model/loss.cc

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

#include "samix/model/loss.h"

#include <atomic>
#include <cmath>

#include "samix/common/error.h"

namespace samix::model {

namespace {

std::atomic<std::uint64_t> ce_evaluations{0};

}  // namespace

std::uint64_t CrossEntropyEvaluations() { return ce_evaluations.load(); }
void ResetCrossEntropyEvaluations() { ce_evaluations.store(0); }

template <typename T>
CrossEntropyResult MaskedCrossEntropy(const Mat<T> &logits, const PseudoLabelSeq &labels,
                                      const MaskSpec &mask, Mat<T> *d_logits, double scale) {
  ce_evaluations.fetch_add(1);
  if (mask.empty()) Fail(ErrorKind::kDegenerateBatch, "no masked frames; batch item skipped");
  if (Eigen::Index(labels.size()) != logits.rows() || mask.frames != logits.rows())
    Fail(ErrorKind::kShape, "logits have " + std::to_string(logits.rows()) + " frames, labels " +
                                std::to_string(labels.size()) + ", mask " +
                                std::to_string(mask.frames));
  const Eigen::Index vocab = logits.cols();
  if (d_logits) *d_logits = Mat<T>::Zero(logits.rows(), vocab);
  const double inv_n = 1.0 / double(mask.size());
  double nll = 0.0;
  std::size_t hits = 0;
  for (int t : mask.indices) {
    const int u = labels.labels[std::size_t(t)];
    if (u < 0 || u >= vocab)
      Fail(ErrorKind::kShape, "label " + std::to_string(u) + " outside vocabulary of " +
                                  std::to_string(vocab));
    Eigen::Index best = 0;
    double mx = double(logits(t, 0));
    for (Eigen::Index c = 1; c < vocab; ++c)
      if (double(logits(t, c)) > mx) {
        mx = double(logits(t, c));
        best = c;
      }
    double z = 0.0;
    for (Eigen::Index c = 0; c < vocab; ++c) z += std::exp(double(logits(t, c)) - mx);
    const double log_z = mx + std::log(z);
    nll += log_z - double(logits(t, u));
    if (best == u) ++hits;
    if (d_logits) {
      for (Eigen::Index c = 0; c < vocab; ++c)
        (*d_logits)(t, c) = T(std::exp(double(logits(t, c)) - log_z) * inv_n * scale);
      (*d_logits)(t, u) -= T(inv_n * scale);
    }
  }
  return {nll * inv_n, double(hits) * inv_n};
}

template <typename T>
SaLossResult SaLoss(const Mat<T> &z1, const Mat<T> &z2, const PseudoLabelSeq &labels1,
                    const PseudoLabelSeq &labels2, const MaskSpec &mask, Mat<T> *d_z1,
                    Mat<T> *d_z2, double scale) {
  auto first = MaskedCrossEntropy(z1, labels1, mask, d_z1, scale);
  auto second = MaskedCrossEntropy(z2, labels2, mask, d_z2, scale);
  SaLossResult r;
  r.total = first.ce + second.ce;
  r.ce = {first.ce, second.ce};
  r.accuracy = {first.accuracy, second.accuracy};
  return r;
}

template <typename T>
CrossEntropyResult BaselineLoss(const Mat<T> &z, const PseudoLabelSeq &primary_labels,
                                const MaskSpec &mask, Mat<T> *d_z, double scale) {
  return MaskedCrossEntropy(z, primary_labels, mask, d_z, scale);
}

#define SAMIX_INSTANTIATE_LOSS(T)                                                             \
  template CrossEntropyResult MaskedCrossEntropy(const Mat<T> &, const PseudoLabelSeq &,      \
                                                 const MaskSpec &, Mat<T> *, double);         \
  template SaLossResult SaLoss(const Mat<T> &, const Mat<T> &, const PseudoLabelSeq &,        \
                               const PseudoLabelSeq &, const MaskSpec &, Mat<T> *, Mat<T> *,  \
                               double);                                                       \
  template CrossEntropyResult BaselineLoss(const Mat<T> &, const PseudoLabelSeq &,            \
                                           const MaskSpec &, Mat<T> *, double);

SAMIX_INSTANTIATE_LOSS(float)
SAMIX_INSTANTIATE_LOSS(double)

#undef SAMIX_INSTANTIATE_LOSS

}  // namespace samix::model
