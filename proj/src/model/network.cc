// samix/model/network.cc

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

#include "samix/model/network.h"

#include "samix/common/error.h"
#include "samix/model/encoder.h"
#include "samix/model/masking.h"

namespace samix::model {

namespace {

void CheckMask(const MaskSpec &mask, Eigen::Index frames) {
  if (mask.frames != frames)
    Fail(ErrorKind::kAlignment, "mask covers " + std::to_string(mask.frames) +
                                    " frames but the encoder produced " + std::to_string(frames));
}

}  // namespace

template <typename T>
Mat<T> SlotVector(const Params<T> &p, const SpeakerEmbedding &e) {
  if (e.kind == EmbeddingKind::kNonSpeaker) return p.non_speaker;
  if (e.vector.size() != p.non_speaker.cols())
    Fail(ErrorKind::kShape, "speaker embedding has " + std::to_string(e.vector.size()) +
                                " dims, model expects " + std::to_string(p.non_speaker.cols()));
  return e.vector.template cast<T>();
}

template <typename T>
SaLossResult SaItemLoss(const Params<T> &p, const ModelConfig &cfg, std::span<const double> mixture,
                        const MaskSpec &mask, const SlotPair &slots, Params<T> *grads,
                        double scale) {
  EncoderCache<T> enc;
  Mat<T> h = EncodeFrames(p, cfg, mixture, grads ? &enc : nullptr);
  CheckMask(mask, h.rows());
  Mat<T> hm = ApplyMask(h, mask, p.mask_embedding);

  std::array<Mat<T>, 2> e{SlotVector(p, slots[0].embedding), SlotVector(p, slots[1].embedding)};
  std::array<SateCache<T>, 2> sc;
  std::array<Mat<T>, 2> c;
  for (int k = 0; k < 2; ++k) c[k] = SateExtract(p, cfg, hm, &e[k], grads ? &sc[k] : nullptr);
  MergeCache<T> mc;
  Mat<T> cm = SmbMerge(p, cfg, c[0], c[1], grads ? &mc : nullptr);
  auto [z1, z2] = PredictHeads(p, cm);

  Mat<T> dz1, dz2;
  SaLossResult r = SaLoss(z1, z2, slots[0].labels, slots[1].labels, mask,
                          grads ? &dz1 : nullptr, grads ? &dz2 : nullptr, scale);
  if (!grads) return r;

  Mat<T> dcm = PredictHeadsBackward(p, cm, &dz1, &dz2, grads);
  auto [dc0, dc1] = SmbMergeBackward(p, cfg, mc, dcm, grads);
  std::array<Mat<T>, 2> dc{std::move(dc0), std::move(dc1)};
  Mat<T> dhm = Mat<T>::Zero(hm.rows(), hm.cols());
  for (int k = 0; k < 2; ++k) {
    Mat<T> de = Mat<T>::Zero(1, e[k].cols());
    dhm += SateBackward(p, cfg, sc[k], dc[k], grads, &de);
    if (slots[k].embedding.kind == EmbeddingKind::kNonSpeaker) grads->non_speaker += de;
  }
  Mat<T> dh = ApplyMaskBackward(mask, dhm, &grads->mask_embedding);
  EncodeFramesBackward(p, cfg, enc, dh, grads);
  return r;
}

template <typename T>
CrossEntropyResult BaselineItemLoss(const Params<T> &p, const ModelConfig &cfg,
                                    std::span<const double> mixture, const MaskSpec &mask,
                                    const PseudoLabelSeq &primary_labels, Params<T> *grads,
                                    double scale) {
  EncoderCache<T> enc;
  Mat<T> h = EncodeFrames(p, cfg, mixture, grads ? &enc : nullptr);
  CheckMask(mask, h.rows());
  Mat<T> hm = ApplyMask(h, mask, p.mask_embedding);
  SateCache<T> sc;
  Mat<T> c = SateExtract(p, cfg, hm, static_cast<const Mat<T> *>(nullptr), grads ? &sc : nullptr);
  Mat<T> z = LinearForward(p.head1, c);
  Mat<T> dz;
  CrossEntropyResult r = BaselineLoss(z, primary_labels, mask, grads ? &dz : nullptr, scale);
  if (!grads) return r;
  Mat<T> dc = LinearBackward(p.head1, c, dz, &grads->head1);
  Mat<T> dhm = SateBackward(p, cfg, sc, dc, grads, static_cast<Mat<T> *>(nullptr));
  Mat<T> dh = ApplyMaskBackward(mask, dhm, &grads->mask_embedding);
  EncodeFramesBackward(p, cfg, enc, dh, grads);
  return r;
}

template <typename T>
std::pair<Mat<T>, Mat<T>> PredictPair(const Params<T> &p, const ModelConfig &cfg,
                                      std::span<const double> mixture,
                                      const SpeakerEmbedding &first,
                                      const SpeakerEmbedding &second) {
  Mat<T> h = EncodeFrames(p, cfg, mixture);
  Mat<T> e1 = SlotVector(p, first), e2 = SlotVector(p, second);
  Mat<T> c1 = SateExtract(p, cfg, h, &e1);
  Mat<T> c2 = SateExtract(p, cfg, h, &e2);
  return PredictHeads(p, SmbMerge(p, cfg, c1, c2));
}

template <typename T>
std::vector<Mat<T>> ExtractLayers(const Params<T> &p, const ModelConfig &cfg,
                                  std::span<const double> mixture,
                                  const SpeakerEmbedding *embedding) {
  Mat<T> h = EncodeFrames(p, cfg, mixture);
  std::vector<Mat<T>> hidden;
  if (embedding) {
    Mat<T> e = SlotVector(p, *embedding);
    SateExtract(p, cfg, h, &e, static_cast<SateCache<T> *>(nullptr), &hidden);
  } else {
    SateExtract(p, cfg, h, static_cast<const Mat<T> *>(nullptr),
                static_cast<SateCache<T> *>(nullptr), &hidden);
  }
  return hidden;
}

template <typename T>
Mat<T> RowSoftmax(const Mat<T> &logits) {
  Mat<T> out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    auto row = logits.row(t).template cast<double>();
    RowVec<double> ex = (row.array() - row.maxCoeff()).exp();
    out.row(t) = (ex / ex.sum()).template cast<T>();
  }
  return out;
}

#define SAMIX_INSTANTIATE_NETWORK(T)                                                            \
  template Mat<T> SlotVector(const Params<T> &, const SpeakerEmbedding &);                      \
  template SaLossResult SaItemLoss(const Params<T> &, const ModelConfig &,                      \
                                   std::span<const double>, const MaskSpec &, const SlotPair &, \
                                   Params<T> *, double);                                        \
  template CrossEntropyResult BaselineItemLoss(const Params<T> &, const ModelConfig &,          \
                                               std::span<const double>, const MaskSpec &,       \
                                               const PseudoLabelSeq &, Params<T> *, double);    \
  template std::pair<Mat<T>, Mat<T>> PredictPair(const Params<T> &, const ModelConfig &,        \
                                                 std::span<const double>,                       \
                                                 const SpeakerEmbedding &,                      \
                                                 const SpeakerEmbedding &);                     \
  template std::vector<Mat<T>> ExtractLayers(const Params<T> &, const ModelConfig &,            \
                                             std::span<const double>, const SpeakerEmbedding *); \
  template Mat<T> RowSoftmax(const Mat<T> &);

SAMIX_INSTANTIATE_NETWORK(float)
SAMIX_INSTANTIATE_NETWORK(double)

#undef SAMIX_INSTANTIATE_NETWORK

}  // namespace samix::model
