// samix/model/ops.cc

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

#include "samix/model/ops.h"

#include <cmath>
#include <numbers>

#include "samix/common/error.h"

namespace samix::model {

template <typename T>
Mat<T> Gelu(const Mat<T> &x) {
  return x.unaryExpr([](T v) { return T(0.5) * v * (T(1) + std::erf(v / std::numbers::sqrt2_v<T>)); });
}

template <typename T>
Mat<T> GeluGrad(const Mat<T> &x) {
  const T inv_sqrt_2pi = T(1) / std::sqrt(T(2) * std::numbers::pi_v<T>);
  return x.unaryExpr([inv_sqrt_2pi](T v) {
    T cdf = T(0.5) * (T(1) + std::erf(v / std::numbers::sqrt2_v<T>));
    return cdf + v * inv_sqrt_2pi * std::exp(T(-0.5) * v * v);
  });
}

template <typename T>
Mat<T> LinearForward(const Linear<T> &p, const Mat<T> &x) {
  if (x.cols() != p.w.cols())
    Fail(ErrorKind::kShape, "linear input has " + std::to_string(x.cols()) +
                                " features, expected " + std::to_string(p.w.cols()));
  Mat<T> y = x * p.w.transpose();
  y.rowwise() += p.b.row(0);
  return y;
}

template <typename T>
Mat<T> LinearBackward(const Linear<T> &p, const Mat<T> &x, const Mat<T> &dy, Linear<T> *grads) {
  if (grads) {
    grads->w.noalias() += dy.transpose() * x;
    grads->b += dy.colwise().sum();
  }
  return dy * p.w;
}

template <typename T>
Mat<T> NormalizeRows(const Mat<T> &x, double epsilon, Eigen::Matrix<T, Eigen::Dynamic, 1> *rstd) {
  Eigen::Matrix<T, Eigen::Dynamic, 1> mean = x.rowwise().mean();
  Mat<T> centered = x.colwise() - mean;
  Eigen::Matrix<T, Eigen::Dynamic, 1> var = centered.array().square().rowwise().mean();
  Eigen::Matrix<T, Eigen::Dynamic, 1> r = (var.array() + T(epsilon)).rsqrt();
  Mat<T> xhat = centered.array().colwise() * r.array();
  if (rstd) *rstd = std::move(r);
  return xhat;
}

template <typename T>
Mat<T> NormForward(const Norm<T> &p, const Mat<T> &x, const Mat<T> *embedding, double epsilon,
                   NormCache<T> *cache) {
  if (x.cols() != p.gamma.cols())
    Fail(ErrorKind::kShape, "normalization input width " + std::to_string(x.cols()) +
                                " != " + std::to_string(p.gamma.cols()));
  Eigen::Matrix<T, Eigen::Dynamic, 1> rstd;
  Mat<T> xhat = NormalizeRows(x, epsilon, &rstd);
  Mat<T> scale = p.gamma;
  Mat<T> cond_scale;
  if (embedding) {
    if (!p.cond) Fail(ErrorKind::kShape, "embedding supplied to an unconditioned normalization");
    if (embedding->rows() != 1 || embedding->cols() != p.cond->scale.w.cols())
      Fail(ErrorKind::kShape, "speaker embedding has dimension " +
                                  std::to_string(embedding->cols()) + ", expected " +
                                  std::to_string(p.cond->scale.w.cols()));
    cond_scale = LinearForward(p.cond->scale, *embedding);
    Mat<T> shift = LinearForward(p.cond->shift, *embedding);
    scale = cond_scale.cwiseProduct(p.gamma) + shift;
  }
  Mat<T> y = xhat.array().rowwise() * scale.row(0).array();
  y.rowwise() += p.beta.row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
    cache->scale = std::move(scale);
    cache->conditioned = embedding != nullptr;
    if (embedding) {
      cache->cond_scale = std::move(cond_scale);
      cache->embedding = *embedding;
    }
  }
  return y;
}

template <typename T>
Mat<T> NormBackward(const Norm<T> &p, const NormCache<T> &c, const Mat<T> &dy, Norm<T> *grads,
                    Mat<T> *d_embedding) {
  const T inv_d = T(1) / T(dy.cols());
  Mat<T> g = dy.array().rowwise() * c.scale.row(0).array();
  Eigen::Matrix<T, Eigen::Dynamic, 1> mean_g = g.rowwise().sum() * inv_d;
  Eigen::Matrix<T, Eigen::Dynamic, 1> mean_gx = g.cwiseProduct(c.xhat).rowwise().sum() * inv_d;
  Mat<T> dx = (g.colwise() - mean_g) - Mat<T>(c.xhat.array().colwise() * mean_gx.array());
  dx = dx.array().colwise() * c.rstd.array();

  if (grads || d_embedding) {
    Mat<T> d_scale = dy.cwiseProduct(c.xhat).colwise().sum();
    if (grads) grads->beta += dy.colwise().sum();
    if (c.conditioned) {
      Mat<T> d_w = d_scale.cwiseProduct(p.gamma);
      const Mat<T> &d_theta = d_scale;
      if (grads) {
        grads->gamma += d_scale.cwiseProduct(c.cond_scale);
        LinearBackward(p.cond->scale, c.embedding, d_w, &grads->cond->scale);
        LinearBackward(p.cond->shift, c.embedding, d_theta, &grads->cond->shift);
      }
      if (d_embedding)
        *d_embedding += d_w * p.cond->scale.w + d_theta * p.cond->shift.w;
    } else if (grads) {
      grads->gamma += d_scale;
    }
  }
  return dx;
}

template <typename T>
Mat<T> AttentionForward(const Attention<T> &p, const Mat<T> &x, int heads,
                        AttentionCache<T> *cache) {
  const Eigen::Index frames = x.rows();
  const Eigen::Index dim = p.q.w.rows();
  const Eigen::Index dh = dim / heads;
  const T scale = T(1) / std::sqrt(T(dh));
  Mat<T> q = LinearForward(p.q, x);
  Mat<T> k = LinearForward(p.k, x);
  Mat<T> v = LinearForward(p.v, x);
  Mat<T> ctx(frames, dim);
  std::vector<Mat<T>> probs(heads);
  for (int h = 0; h < heads; ++h) {
    Mat<T> s = q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose() * scale;
    Eigen::Matrix<T, Eigen::Dynamic, 1> mx = s.rowwise().maxCoeff();
    s = (s.colwise() - mx).array().exp();
    Eigen::Matrix<T, Eigen::Dynamic, 1> z = s.rowwise().sum();
    s = s.array().colwise() / z.array();
    ctx.middleCols(h * dh, dh) = s * v.middleCols(h * dh, dh);
    probs[h] = std::move(s);
  }
  Mat<T> out = LinearForward(p.o, ctx);
  if (cache) {
    cache->x = x;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->ctx = std::move(ctx);
    cache->probs = std::move(probs);
  }
  return out;
}

template <typename T>
Mat<T> AttentionBackward(const Attention<T> &p, const AttentionCache<T> &c, const Mat<T> &dy,
                         int heads, Attention<T> *grads) {
  const Eigen::Index dim = p.q.w.rows();
  const Eigen::Index dh = dim / heads;
  const T scale = T(1) / std::sqrt(T(dh));
  Mat<T> dctx = LinearBackward(p.o, c.ctx, dy, grads ? &grads->o : nullptr);
  Mat<T> dq(c.q.rows(), dim), dk(c.k.rows(), dim), dv(c.v.rows(), dim);
  for (int h = 0; h < heads; ++h) {
    const Mat<T> &pr = c.probs[h];
    Mat<T> dctx_h = dctx.middleCols(h * dh, dh);
    Mat<T> dp = dctx_h * c.v.middleCols(h * dh, dh).transpose();
    dv.middleCols(h * dh, dh) = pr.transpose() * dctx_h;
    Eigen::Matrix<T, Eigen::Dynamic, 1> row_dot = dp.cwiseProduct(pr).rowwise().sum();
    Mat<T> ds = pr.cwiseProduct(Mat<T>(dp.colwise() - row_dot)) * scale;
    dq.middleCols(h * dh, dh) = ds * c.k.middleCols(h * dh, dh);
    dk.middleCols(h * dh, dh) = ds.transpose() * c.q.middleCols(h * dh, dh);
  }
  Mat<T> dx = LinearBackward(p.q, c.x, dq, grads ? &grads->q : nullptr);
  dx += LinearBackward(p.k, c.x, dk, grads ? &grads->k : nullptr);
  dx += LinearBackward(p.v, c.x, dv, grads ? &grads->v : nullptr);
  return dx;
}

template <typename T>
Mat<T> FeedForwardForward(const FeedForward<T> &p, const Mat<T> &x, FeedForwardCache<T> *cache) {
  Mat<T> pre = LinearForward(p.in, x);
  Mat<T> act = Gelu(pre);
  Mat<T> y = LinearForward(p.out, act);
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return y;
}

template <typename T>
Mat<T> FeedForwardBackward(const FeedForward<T> &p, const FeedForwardCache<T> &c,
                           const Mat<T> &dy, FeedForward<T> *grads) {
  Mat<T> dact = LinearBackward(p.out, c.act, dy, grads ? &grads->out : nullptr);
  Mat<T> dpre = dact.cwiseProduct(GeluGrad(c.pre));
  return LinearBackward(p.in, c.x, dpre, grads ? &grads->in : nullptr);
}

template <typename T>
Mat<T> LayerForward(const Layer<T> &p, const Mat<T> &x, const Mat<T> *embedding,
                    const ModelConfig &cfg, LayerCache<T> *cache) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(double(x.data()[i])))
      Fail(ErrorKind::kNumeric, "non-finite input to transformer layer");
  Mat<T> n1 = NormForward(p.norm1, x, embedding, cfg.norm_epsilon, cache ? &cache->norm1 : nullptr);
  Mat<T> h = x + AttentionForward(p.attn, n1, cfg.attention_heads, cache ? &cache->attn : nullptr);
  Mat<T> n2 = NormForward(p.norm2, h, embedding, cfg.norm_epsilon, cache ? &cache->norm2 : nullptr);
  return h + FeedForwardForward(p.ffn, n2, cache ? &cache->ffn : nullptr);
}

template <typename T>
Mat<T> LayerBackward(const Layer<T> &p, const LayerCache<T> &c, const Mat<T> &dy,
                     const ModelConfig &cfg, Layer<T> *grads, Mat<T> *d_embedding) {
  Mat<T> dn2 = FeedForwardBackward(p.ffn, c.ffn, dy, grads ? &grads->ffn : nullptr);
  Mat<T> dh = dy + NormBackward(p.norm2, c.norm2, dn2, grads ? &grads->norm2 : nullptr, d_embedding);
  Mat<T> dn1 = AttentionBackward(p.attn, c.attn, dh, cfg.attention_heads,
                                 grads ? &grads->attn : nullptr);
  return dh + NormBackward(p.norm1, c.norm1, dn1, grads ? &grads->norm1 : nullptr, d_embedding);
}

template <typename T>
Mat<T> ConvForward(const Mat<T> &w, const Mat<T> &b, const Mat<T> &x, int kernel, int stride,
                   ConvCache<T> *cache) {
  const Eigen::Index in_ch = x.cols();
  if (x.rows() < kernel) Fail(ErrorKind::kTooShort, "convolution input shorter than its kernel");
  const Eigen::Index out_len = (x.rows() - kernel) / stride + 1;
  const Eigen::Index width = kernel * in_ch;
  Mat<T> cols(out_len, width);
  for (Eigen::Index t = 0; t < out_len; ++t)
    cols.row(t) = Eigen::Map<const RowVec<T>>(x.data() + t * stride * in_ch, width);
  Mat<T> pre = cols * w.transpose();
  pre.rowwise() += b.row(0);
  Mat<T> y = Gelu(pre);
  if (cache) {
    cache->cols = std::move(cols);
    cache->pre = std::move(pre);
    cache->in_rows = x.rows();
    cache->in_channels = in_ch;
  }
  return y;
}

template <typename T>
Mat<T> ConvBackward(const Mat<T> &w, const ConvCache<T> &c, const Mat<T> &dy, int kernel,
                    int stride, Mat<T> *dw, Mat<T> *db, bool need_input_grad) {
  Mat<T> dpre = dy.cwiseProduct(GeluGrad(c.pre));
  if (dw) dw->noalias() += dpre.transpose() * c.cols;
  if (db) *db += dpre.colwise().sum();
  if (!need_input_grad) return {};
  Mat<T> dcols = dpre * w;
  Mat<T> dx = Mat<T>::Zero(c.in_rows, c.in_channels);
  const Eigen::Index width = kernel * c.in_channels;
  for (Eigen::Index t = 0; t < dcols.rows(); ++t)
    Eigen::Map<RowVec<T>>(dx.data() + t * stride * c.in_channels, width) += dcols.row(t);
  return dx;
}

template <typename T>
Mat<T> PosConvForward(const PosConv<T> &p, const Mat<T> &x, PosConvCache<T> *cache) {
  const Eigen::Index frames = x.rows();
  const Eigen::Index kernel = p.w.rows();
  const Eigen::Index pad = kernel / 2;
  Mat<T> pre(frames, x.cols());
  pre.rowwise() = p.b.row(0);
  for (Eigen::Index t = 0; t < frames; ++t)
    for (Eigen::Index j = 0; j < kernel; ++j) {
      Eigen::Index src = t + j - pad;
      if (src < 0 || src >= frames) continue;
      pre.row(t) += p.w.row(j).cwiseProduct(x.row(src));
    }
  Mat<T> y = x + Gelu(pre);
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
  }
  return y;
}

template <typename T>
Mat<T> PosConvBackward(const PosConv<T> &p, const PosConvCache<T> &c, const Mat<T> &dy,
                       PosConv<T> *grads) {
  const Eigen::Index frames = dy.rows();
  const Eigen::Index kernel = p.w.rows();
  const Eigen::Index pad = kernel / 2;
  Mat<T> dpre = dy.cwiseProduct(GeluGrad(c.pre));
  Mat<T> dx = dy;
  if (grads) grads->b += dpre.colwise().sum();
  for (Eigen::Index t = 0; t < frames; ++t)
    for (Eigen::Index j = 0; j < kernel; ++j) {
      Eigen::Index src = t + j - pad;
      if (src < 0 || src >= frames) continue;
      if (grads) grads->w.row(j) += dpre.row(t).cwiseProduct(c.x.row(src));
      dx.row(src) += dpre.row(t).cwiseProduct(p.w.row(j));
    }
  return dx;
}

#define SAMIX_INSTANTIATE_OPS(T)                                                              \
  template Mat<T> Gelu(const Mat<T> &);                                                       \
  template Mat<T> GeluGrad(const Mat<T> &);                                                   \
  template Mat<T> LinearForward(const Linear<T> &, const Mat<T> &);                           \
  template Mat<T> LinearBackward(const Linear<T> &, const Mat<T> &, const Mat<T> &,           \
                                 Linear<T> *);                                                \
  template Mat<T> NormalizeRows(const Mat<T> &, double,                                       \
                                Eigen::Matrix<T, Eigen::Dynamic, 1> *);                       \
  template Mat<T> NormForward(const Norm<T> &, const Mat<T> &, const Mat<T> *, double,        \
                              NormCache<T> *);                                                \
  template Mat<T> NormBackward(const Norm<T> &, const NormCache<T> &, const Mat<T> &,         \
                               Norm<T> *, Mat<T> *);                                          \
  template Mat<T> AttentionForward(const Attention<T> &, const Mat<T> &, int,                 \
                                   AttentionCache<T> *);                                      \
  template Mat<T> AttentionBackward(const Attention<T> &, const AttentionCache<T> &,          \
                                    const Mat<T> &, int, Attention<T> *);                     \
  template Mat<T> FeedForwardForward(const FeedForward<T> &, const Mat<T> &,                  \
                                     FeedForwardCache<T> *);                                  \
  template Mat<T> FeedForwardBackward(const FeedForward<T> &, const FeedForwardCache<T> &,    \
                                      const Mat<T> &, FeedForward<T> *);                      \
  template Mat<T> LayerForward(const Layer<T> &, const Mat<T> &, const Mat<T> *,              \
                               const ModelConfig &, LayerCache<T> *);                         \
  template Mat<T> LayerBackward(const Layer<T> &, const LayerCache<T> &, const Mat<T> &,      \
                                const ModelConfig &, Layer<T> *, Mat<T> *);                   \
  template Mat<T> ConvForward(const Mat<T> &, const Mat<T> &, const Mat<T> &, int, int,       \
                              ConvCache<T> *);                                                \
  template Mat<T> ConvBackward(const Mat<T> &, const ConvCache<T> &, const Mat<T> &, int,     \
                               int, Mat<T> *, Mat<T> *, bool);                                \
  template Mat<T> PosConvForward(const PosConv<T> &, const Mat<T> &, PosConvCache<T> *);      \
  template Mat<T> PosConvBackward(const PosConv<T> &, const PosConvCache<T> &,                \
                                  const Mat<T> &, PosConv<T> *);

SAMIX_INSTANTIATE_OPS(float)
SAMIX_INSTANTIATE_OPS(double)

#undef SAMIX_INSTANTIATE_OPS

}  // namespace samix::model
