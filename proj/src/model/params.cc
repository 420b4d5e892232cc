// samix/model/params.cc

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

#include "samix/model/params.h"

#include <cmath>
#include <random>

#include "samix/common/rng.h"

namespace samix::model {

namespace {

template <typename T>
Linear<T> ZeroLinear(int in, int out) {
  return {Mat<T>::Zero(out, in), Mat<T>::Zero(1, out)};
}

template <typename T>
Norm<T> MakeNorm(int dim, bool conditioned, int embed_dim) {
  Norm<T> n{Mat<T>::Zero(1, dim), Mat<T>::Zero(1, dim), std::nullopt};
  if (conditioned) n.cond = Conditioning<T>{ZeroLinear<T>(embed_dim, dim), ZeroLinear<T>(embed_dim, dim)};
  return n;
}

// Identity affine; conditioning collapsed to w(e) == 1, theta(e) == 0.
template <typename T>
void ResetNorm(Norm<T> &n) {
  n.gamma.setOnes();
  n.beta.setZero();
  if (n.cond) {
    n.cond->scale.w.setZero();
    n.cond->scale.b.setOnes();
    n.cond->shift.w.setZero();
    n.cond->shift.b.setZero();
  }
}

template <typename T>
Layer<T> MakeLayer(const ModelConfig &cfg, bool conditioned) {
  Layer<T> l;
  l.norm1 = MakeNorm<T>(cfg.D, conditioned, cfg.E);
  l.norm2 = MakeNorm<T>(cfg.D, conditioned, cfg.E);
  l.attn = {ZeroLinear<T>(cfg.D, cfg.D), ZeroLinear<T>(cfg.D, cfg.D),
            ZeroLinear<T>(cfg.D, cfg.D), ZeroLinear<T>(cfg.D, cfg.D)};
  l.ffn = {ZeroLinear<T>(cfg.D, cfg.ffn_dim), ZeroLinear<T>(cfg.ffn_dim, cfg.D)};
  return l;
}

template <typename T>
void Gaussian(Mat<T> &m, double stddev, Rng &rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = T(dist(rng));
}

template <typename T>
void InitLinear(Linear<T> &l, Rng &rng) {
  Gaussian(l.w, 1.0 / std::sqrt(double(l.w.cols())), rng);
}

template <typename T>
void InitLayer(Layer<T> &l, Rng &rng) {
  ResetNorm(l.norm1);
  ResetNorm(l.norm2);
  InitLinear(l.attn.q, rng);
  InitLinear(l.attn.k, rng);
  InitLinear(l.attn.v, rng);
  InitLinear(l.attn.o, rng);
  InitLinear(l.ffn.in, rng);
  InitLinear(l.ffn.out, rng);
}

}  // namespace

template <typename T>
Params<T> AllocateParams(const ModelConfig &cfg) {
  cfg.Validate();
  Params<T> p;
  int in_ch = 1;
  for (std::size_t i = 0; i < cfg.conv_kernels.size(); ++i) {
    p.encoder.conv_w.push_back(Mat<T>::Zero(cfg.conv_channels, cfg.conv_kernels[i] * in_ch));
    p.encoder.conv_b.push_back(Mat<T>::Zero(1, cfg.conv_channels));
    in_ch = cfg.conv_channels;
  }
  p.encoder.feature_norm = MakeNorm<T>(cfg.conv_channels, false, cfg.E);
  p.encoder.proj = ZeroLinear<T>(cfg.conv_channels, cfg.D);
  p.mask_embedding = Mat<T>::Zero(1, cfg.D);
  p.pos = {Mat<T>::Zero(cfg.pos_conv_kernel, cfg.D), Mat<T>::Zero(1, cfg.D)};
  for (int i = 1; i <= cfg.layer_count; ++i)
    p.layers.push_back(MakeLayer<T>(cfg, i == cfg.satl_layer_index));
  p.merge_proj = ZeroLinear<T>(2 * cfg.D, cfg.D);
  p.merge_layer = MakeLayer<T>(cfg, false);
  p.head1 = ZeroLinear<T>(cfg.D, cfg.vocabulary());
  p.head2 = ZeroLinear<T>(cfg.D, cfg.vocabulary());
  p.non_speaker = Mat<T>::Zero(1, cfg.E);
  return p;
}

template <typename T>
Params<T> InitParams(const ModelConfig &cfg, std::uint64_t seed) {
  Params<T> p = AllocateParams<T>(cfg);
  Rng rng = MakeRng(seed, {0x1417});
  for (auto &w : p.encoder.conv_w) Gaussian(w, std::sqrt(2.0 / double(w.cols())), rng);
  ResetNorm(p.encoder.feature_norm);
  InitLinear(p.encoder.proj, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < p.mask_embedding.size(); ++i)
    p.mask_embedding.data()[i] = T(unit(rng));
  Gaussian(p.pos.w, 1.0 / std::sqrt(double(p.pos.w.rows())), rng);
  for (auto &l : p.layers) InitLayer(l, rng);
  InitLinear(p.merge_proj, rng);
  InitLayer(p.merge_layer, rng);
  InitLinear(p.head1, rng);
  InitLinear(p.head2, rng);
  Gaussian(p.non_speaker, 0.02, rng);
  return p;
}

template Params<float> AllocateParams<float>(const ModelConfig &);
template Params<double> AllocateParams<double>(const ModelConfig &);
template Params<float> InitParams<float>(const ModelConfig &, std::uint64_t);
template Params<double> InitParams<double>(const ModelConfig &, std::uint64_t);

}  // namespace samix::model
