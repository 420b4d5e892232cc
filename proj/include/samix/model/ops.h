// samix/model/ops.h

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

#ifndef SAMIX_MODEL_OPS_H_
#define SAMIX_MODEL_OPS_H_

#include <vector>

#include "samix/common/tensor.h"
#include "samix/model/params.h"

// Forward/backward pairs for every differentiable building block. Forward
// passes fill a cache; backward passes take the upstream gradient, add
// parameter gradients into `grads` (when non-null) and return the input
// gradient.
namespace samix::model {

template <typename T>
Mat<T> Gelu(const Mat<T> &x);
template <typename T>
Mat<T> GeluGrad(const Mat<T> &x);

template <typename T>
Mat<T> LinearForward(const Linear<T> &p, const Mat<T> &x);
template <typename T>
Mat<T> LinearBackward(const Linear<T> &p, const Mat<T> &x, const Mat<T> &dy, Linear<T> *grads);

template <typename T>
struct NormCache {
  Mat<T> xhat;
  Eigen::Matrix<T, Eigen::Dynamic, 1> rstd;
  Mat<T> scale;       // effective per-feature scale, 1 x D
  Mat<T> cond_scale;  // w(e), 1 x D (conditioned only)
  Mat<T> embedding;   // e, 1 x E (conditioned only)
  bool conditioned = false;
};

// Per-row mean/variance normalization (biased variance), no affine part.
template <typename T>
Mat<T> NormalizeRows(const Mat<T> &x, double epsilon,
                     Eigen::Matrix<T, Eigen::Dynamic, 1> *rstd = nullptr);

// Layer normalization; when `embedding` is non-null the norm must carry
// conditioning and the scale becomes w(e) * gamma + theta(e).
template <typename T>
Mat<T> NormForward(const Norm<T> &p, const Mat<T> &x, const Mat<T> *embedding,
                   double epsilon, NormCache<T> *cache);
template <typename T>
Mat<T> NormBackward(const Norm<T> &p, const NormCache<T> &cache, const Mat<T> &dy,
                    Norm<T> *grads, Mat<T> *d_embedding);

template <typename T>
struct AttentionCache {
  Mat<T> x, q, k, v, ctx;
  std::vector<Mat<T>> probs;
};

template <typename T>
Mat<T> AttentionForward(const Attention<T> &p, const Mat<T> &x, int heads,
                        AttentionCache<T> *cache);
template <typename T>
Mat<T> AttentionBackward(const Attention<T> &p, const AttentionCache<T> &cache,
                         const Mat<T> &dy, int heads, Attention<T> *grads);

template <typename T>
struct FeedForwardCache {
  Mat<T> x, pre, act;
};

template <typename T>
Mat<T> FeedForwardForward(const FeedForward<T> &p, const Mat<T> &x, FeedForwardCache<T> *cache);
template <typename T>
Mat<T> FeedForwardBackward(const FeedForward<T> &p, const FeedForwardCache<T> &cache,
                           const Mat<T> &dy, FeedForward<T> *grads);

template <typename T>
struct LayerCache {
  NormCache<T> norm1, norm2;
  AttentionCache<T> attn;
  FeedForwardCache<T> ffn;
};

// Pre-norm block: h = x + Attn(N1(x)); y = h + FFN(N2(h)). With an
// embedding both norms are conditional (speaker-adapted layer).
template <typename T>
Mat<T> LayerForward(const Layer<T> &p, const Mat<T> &x, const Mat<T> *embedding,
                    const ModelConfig &cfg, LayerCache<T> *cache);
template <typename T>
Mat<T> LayerBackward(const Layer<T> &p, const LayerCache<T> &cache, const Mat<T> &dy,
                     const ModelConfig &cfg, Layer<T> *grads, Mat<T> *d_embedding);

template <typename T>
struct ConvCache {
  Mat<T> cols, pre;
  Eigen::Index in_rows = 0;
  Eigen::Index in_channels = 0;
};

// Strided 1-D convolution (time x channels, row-major) followed by GELU.
template <typename T>
Mat<T> ConvForward(const Mat<T> &w, const Mat<T> &b, const Mat<T> &x, int kernel, int stride,
                   ConvCache<T> *cache);
template <typename T>
Mat<T> ConvBackward(const Mat<T> &w, const ConvCache<T> &cache, const Mat<T> &dy, int kernel,
                    int stride, Mat<T> *dw, Mat<T> *db, bool need_input_grad);

template <typename T>
struct PosConvCache {
  Mat<T> x, pre;
};

// y = x + GELU(depthwise_conv(x) + b), "same" padding along time.
template <typename T>
Mat<T> PosConvForward(const PosConv<T> &p, const Mat<T> &x, PosConvCache<T> *cache);
template <typename T>
Mat<T> PosConvBackward(const PosConv<T> &p, const PosConvCache<T> &cache, const Mat<T> &dy,
                       PosConv<T> *grads);

}  // namespace samix::model

#endif  // SAMIX_MODEL_OPS_H_
