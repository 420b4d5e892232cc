// samix/model/params.h

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

#ifndef SAMIX_MODEL_PARAMS_H_
#define SAMIX_MODEL_PARAMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samix/common/tensor.h"
#include "samix/model/config.h"

namespace samix::model {

// y = x w^T + b with w: out x in and b: 1 x out.
template <typename T>
struct Linear {
  Mat<T> w;
  Mat<T> b;
};

// Speaker conditioning of a normalization's scale: w(e) and theta(e).
template <typename T>
struct Conditioning {
  Linear<T> scale;  // E -> D
  Linear<T> shift;  // E -> D
};

// Layer normalization; with `cond` present it becomes conditional layer
// normalization when an embedding is supplied.
template <typename T>
struct Norm {
  Mat<T> gamma;  // 1 x D
  Mat<T> beta;   // 1 x D
  std::optional<Conditioning<T>> cond;
};

template <typename T>
struct Attention {
  Linear<T> q, k, v, o;
};

template <typename T>
struct FeedForward {
  Linear<T> in, out;
};

template <typename T>
struct Layer {
  Norm<T> norm1, norm2;
  Attention<T> attn;
  FeedForward<T> ffn;
};

template <typename T>
struct Encoder {
  std::vector<Mat<T>> conv_w;  // Cout x (kernel * Cin)
  std::vector<Mat<T>> conv_b;  // 1 x Cout
  Norm<T> feature_norm;
  Linear<T> proj;              // C -> D
};

template <typename T>
struct PosConv {
  Mat<T> w;  // kernel x D (depthwise)
  Mat<T> b;  // 1 x D
};

template <typename T>
struct Params {
  Encoder<T> encoder;
  Mat<T> mask_embedding;  // 1 x D
  PosConv<T> pos;
  std::vector<Layer<T>> layers;
  Linear<T> merge_proj;   // 2D -> D
  Layer<T> merge_layer;   // plain transformer layer
  Linear<T> head1, head2; // D -> K + 1
  Mat<T> non_speaker;     // 1 x E, the learnable e^s
};

// Zero-filled parameters with the shapes implied by cfg.
template <typename T>
Params<T> AllocateParams(const ModelConfig &cfg);

// Random initialization. Conditioning starts collapsed (w(e) == 1,
// theta(e) == 0), so an untrained adapted layer ignores the embedding.
template <typename T>
Params<T> InitParams(const ModelConfig &cfg, std::uint64_t seed);

namespace detail {

template <typename F, typename... L>
void VisitLinear(F &f, const std::string &name, L &...l) {
  f(name + ".w", l.w...);
  f(name + ".b", l.b...);
}

template <typename F, typename N, typename... Ns>
void VisitNorm(F &f, const std::string &name, N &n, Ns &...ns) {
  f(name + ".gamma", n.gamma, ns.gamma...);
  f(name + ".beta", n.beta, ns.beta...);
  if (n.cond) {
    VisitLinear(f, name + ".cond_scale", n.cond->scale, ns.cond->scale...);
    VisitLinear(f, name + ".cond_shift", n.cond->shift, ns.cond->shift...);
  }
}

template <typename F, typename... L>
void VisitLayer(F &f, const std::string &name, L &...l) {
  VisitNorm(f, name + ".norm1", l.norm1...);
  VisitLinear(f, name + ".attn.q", l.attn.q...);
  VisitLinear(f, name + ".attn.k", l.attn.k...);
  VisitLinear(f, name + ".attn.v", l.attn.v...);
  VisitLinear(f, name + ".attn.o", l.attn.o...);
  VisitNorm(f, name + ".norm2", l.norm2...);
  VisitLinear(f, name + ".ffn.in", l.ffn.in...);
  VisitLinear(f, name + ".ffn.out", l.ffn.out...);
}

}  // namespace detail

// Calls f(name, tensor...) for every tensor, walking several identically
// shaped parameter sets in lock step. Order is fixed and defines the
// checkpoint record order.
template <typename F, typename P, typename... Ps>
void VisitTensors(F &&f, P &p, Ps &...ps) {
  for (std::size_t i = 0; i < p.encoder.conv_w.size(); ++i) {
    const std::string name = "encoder.conv" + std::to_string(i);
    f(name + ".w", p.encoder.conv_w[i], ps.encoder.conv_w[i]...);
    f(name + ".b", p.encoder.conv_b[i], ps.encoder.conv_b[i]...);
  }
  detail::VisitNorm(f, "encoder.feature_norm", p.encoder.feature_norm,
                    ps.encoder.feature_norm...);
  detail::VisitLinear(f, "encoder.proj", p.encoder.proj, ps.encoder.proj...);
  f("mask_embedding", p.mask_embedding, ps.mask_embedding...);
  f("pos.w", p.pos.w, ps.pos.w...);
  f("pos.b", p.pos.b, ps.pos.b...);
  for (std::size_t i = 0; i < p.layers.size(); ++i)
    detail::VisitLayer(f, "layers." + std::to_string(i), p.layers[i], ps.layers[i]...);
  detail::VisitLinear(f, "merge.proj", p.merge_proj, ps.merge_proj...);
  detail::VisitLayer(f, "merge.layer", p.merge_layer, ps.merge_layer...);
  detail::VisitLinear(f, "head1", p.head1, ps.head1...);
  detail::VisitLinear(f, "head2", p.head2, ps.head2...);
  f("non_speaker", p.non_speaker, ps.non_speaker...);
}

template <typename T>
void ZeroParams(Params<T> &p) {
  VisitTensors([](const std::string &, Mat<T> &m) { m.setZero(); }, p);
}

template <typename T>
std::size_t ParamCount(Params<T> &p) {
  std::size_t n = 0;
  VisitTensors([&](const std::string &, Mat<T> &m) { n += std::size_t(m.size()); }, p);
  return n;
}

// L2 norm over every tensor, accumulated in double.
template <typename T>
double GlobalNorm(Params<T> &p) {
  double acc = 0.0;
  VisitTensors(
      [&](const std::string &, Mat<T> &m) { acc += m.template cast<double>().squaredNorm(); },
      p);
  return std::sqrt(acc);
}

template <typename U, typename T>
Params<U> CastParams(const ModelConfig &cfg, const Params<T> &src) {
  Params<U> out = AllocateParams<U>(cfg);
  auto &in = const_cast<Params<T> &>(src);
  VisitTensors([](const std::string &, Mat<U> &o, Mat<T> &i) { o = i.template cast<U>(); },
               out, in);
  return out;
}

}  // namespace samix::model

#endif  // SAMIX_MODEL_PARAMS_H_
