// samix/model/sate.cc

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

#include "samix/model/sate.h"

#include "samix/common/error.h"

namespace samix::model {

template <typename T>
Mat<T> SateExtract(const Params<T> &p, const ModelConfig &cfg, const Mat<T> &masked_features,
                   const Mat<T> *embedding, SateCache<T> *cache, std::vector<Mat<T>> *hidden) {
  if (cfg.satl_layer_index < 1 || cfg.satl_layer_index > int(p.layers.size()))
    Fail(ErrorKind::kConfig, "satl_layer_index " + std::to_string(cfg.satl_layer_index) +
                                 " outside [1, " + std::to_string(p.layers.size()) + "]");
  Mat<T> x = PosConvForward(p.pos, masked_features, cache ? &cache->pos : nullptr);
  if (hidden) {
    hidden->clear();
    hidden->push_back(x);
  }
  if (cache) cache->layers.resize(p.layers.size());
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const bool adapted = int(i) + 1 == cfg.satl_layer_index;
    x = LayerForward(p.layers[i], x, adapted ? embedding : nullptr, cfg,
                     cache ? &cache->layers[i] : nullptr);
    if (hidden) hidden->push_back(x);
  }
  return x;
}

template <typename T>
Mat<T> SateBackward(const Params<T> &p, const ModelConfig &cfg, const SateCache<T> &cache,
                    const Mat<T> &d_output, Params<T> *grads, Mat<T> *d_embedding) {
  Mat<T> d = d_output;
  for (std::size_t i = p.layers.size(); i-- > 0;) {
    const bool adapted = int(i) + 1 == cfg.satl_layer_index;
    d = LayerBackward(p.layers[i], cache.layers[i], d, cfg, grads ? &grads->layers[i] : nullptr,
                      adapted ? d_embedding : nullptr);
  }
  return PosConvBackward(p.pos, cache.pos, d, grads ? &grads->pos : nullptr);
}

template <typename T>
Mat<T> SmbMerge(const Params<T> &p, const ModelConfig &cfg, const Mat<T> &first,
                const Mat<T> &second, MergeCache<T> *cache) {
  if (first.rows() != second.rows() || first.cols() != second.cols())
    Fail(ErrorKind::kShape, "merge inputs differ in shape (" + std::to_string(first.rows()) + "x" +
                                std::to_string(first.cols()) + " vs " +
                                std::to_string(second.rows()) + "x" +
                                std::to_string(second.cols()) + ")");
  Mat<T> concat(first.rows(), first.cols() + second.cols());
  concat << first, second;
  Mat<T> projected = LinearForward(p.merge_proj, concat);
  Mat<T> out = LayerForward(p.merge_layer, projected, static_cast<const Mat<T> *>(nullptr), cfg,
                            cache ? &cache->layer : nullptr);
  if (cache) cache->concat = std::move(concat);
  return out;
}

template <typename T>
std::pair<Mat<T>, Mat<T>> SmbMergeBackward(const Params<T> &p, const ModelConfig &cfg,
                                           const MergeCache<T> &cache, const Mat<T> &d_merged,
                                           Params<T> *grads) {
  Mat<T> d = LayerBackward(p.merge_layer, cache.layer, d_merged, cfg,
                           grads ? &grads->merge_layer : nullptr, static_cast<Mat<T> *>(nullptr));
  Mat<T> dc = LinearBackward(p.merge_proj, cache.concat, d, grads ? &grads->merge_proj : nullptr);
  const Eigen::Index half = dc.cols() / 2;
  return {dc.leftCols(half), dc.rightCols(half)};
}

template <typename T>
std::pair<Mat<T>, Mat<T>> PredictHeads(const Params<T> &p, const Mat<T> &merged) {
  return {LinearForward(p.head1, merged), LinearForward(p.head2, merged)};
}

template <typename T>
Mat<T> PredictHeadsBackward(const Params<T> &p, const Mat<T> &merged, const Mat<T> *d_z1,
                            const Mat<T> *d_z2, Params<T> *grads) {
  Mat<T> d = Mat<T>::Zero(merged.rows(), merged.cols());
  if (d_z1) d += LinearBackward(p.head1, merged, *d_z1, grads ? &grads->head1 : nullptr);
  if (d_z2) d += LinearBackward(p.head2, merged, *d_z2, grads ? &grads->head2 : nullptr);
  return d;
}

void CheckVocabulary(const ModelConfig &cfg, int codebook_vocabulary) {
  if (codebook_vocabulary != cfg.vocabulary())
    Fail(ErrorKind::kConfig, "codebook vocabulary " + std::to_string(codebook_vocabulary) +
                                 " does not match model vocabulary " +
                                 std::to_string(cfg.vocabulary()));
}

#define SAMIX_INSTANTIATE_SATE(T)                                                             \
  template Mat<T> SateExtract(const Params<T> &, const ModelConfig &, const Mat<T> &,         \
                              const Mat<T> *, SateCache<T> *, std::vector<Mat<T>> *);         \
  template Mat<T> SateBackward(const Params<T> &, const ModelConfig &, const SateCache<T> &,  \
                               const Mat<T> &, Params<T> *, Mat<T> *);                        \
  template Mat<T> SmbMerge(const Params<T> &, const ModelConfig &, const Mat<T> &,            \
                           const Mat<T> &, MergeCache<T> *);                                  \
  template std::pair<Mat<T>, Mat<T>> SmbMergeBackward(const Params<T> &, const ModelConfig &, \
                                                      const MergeCache<T> &, const Mat<T> &,  \
                                                      Params<T> *);                           \
  template std::pair<Mat<T>, Mat<T>> PredictHeads(const Params<T> &, const Mat<T> &);         \
  template Mat<T> PredictHeadsBackward(const Params<T> &, const Mat<T> &, const Mat<T> *,     \
                                       const Mat<T> *, Params<T> *);

SAMIX_INSTANTIATE_SATE(float)
SAMIX_INSTANTIATE_SATE(double)

#undef SAMIX_INSTANTIATE_SATE

}  // namespace samix::model
