// samix/evalkit/gradcheck.cc

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

#include "samix/evalkit/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "samix/model/loss.h"
#include "samix/model/ops.h"
#include "samix/model/sate.h"

namespace samix::evalkit {

using model::Params;

namespace {

void FillGaussian(MatD &m, double sigma, Rng &rng) {
  std::normal_distribution<double> dist(0.0, sigma);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
}

MatD Gaussian(Eigen::Index rows, Eigen::Index cols, double sigma, Rng &rng) {
  MatD m(rows, cols);
  FillGaussian(m, sigma, rng);
  return m;
}

model::ModelConfig SmallConfig(int dim) {
  model::ModelConfig c;
  c.D = dim;
  c.E = std::max(2, dim / 2);
  c.layer_count = 1;
  c.satl_layer_index = 1;
  c.attention_heads = dim % 2 == 0 ? 2 : 1;
  c.ffn_dim = 2 * dim;
  return c;
}

// Random parameters everywhere, conditioning included.
Params<double> RandomParams(const model::ModelConfig &c, Rng &rng) {
  Params<double> p = model::AllocateParams<double>(c);
  model::VisitTensors(
      [&](const std::string &name, MatD &m) {
        const bool gain = name.find("gamma") != std::string::npos;
        FillGaussian(m, gain ? 0.3 : 1.0 / std::sqrt(double(std::max<Eigen::Index>(m.cols(), 1))),
                     rng);
        if (gain) m.array() += 1.0;
      },
      p);
  return p;
}

}  // namespace

void CompareTensor(const std::string &name, MatD &param, const MatD &analytic,
                   const std::function<double()> &loss, const GradCheckOptions &opt, Rng &rng,
                   GradCheckResult &result) {
  std::vector<Eigen::Index> idx(std::size_t(param.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index(0));
  if (opt.max_entries > 0 && idx.size() > std::size_t(opt.max_entries)) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::size_t(opt.max_entries));
  }
  for (Eigen::Index i : idx) {
    const double saved = param.data()[i];
    param.data()[i] = saved + opt.step;
    const double up = loss();
    param.data()[i] = saved - opt.step;
    const double down = loss();
    param.data()[i] = saved;
    const double numeric = (up - down) / (2.0 * opt.step);
    const double a = analytic.data()[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), opt.floor});
    const double rel = std::abs(a - numeric) / denom;
    ++result.checked;
    if (rel > result.max_rel_error || !std::isfinite(rel)) {
      result.max_rel_error = std::isfinite(rel) ? rel : INFINITY;
      result.worst = name + "[" + std::to_string(i) + "]";
    }
  }
}

GradCheckResult CheckClnGradients(int frames, int dim, int embed_dim,
                                  const GradCheckOptions &opt) {
  Rng rng = MakeRng(opt.seed, {0xc1, std::uint64_t(frames), std::uint64_t(dim)});
  model::Norm<double> n;
  n.gamma = Gaussian(1, dim, 0.3, rng).array() + 1.0;
  n.beta = Gaussian(1, dim, 0.3, rng);
  model::Conditioning<double> c;
  c.scale = {Gaussian(dim, embed_dim, 0.5, rng), Gaussian(1, dim, 0.3, rng).array() + 1.0};
  c.shift = {Gaussian(dim, embed_dim, 0.5, rng), Gaussian(1, dim, 0.3, rng)};
  n.cond = c;
  MatD x = Gaussian(frames, dim, 1.0, rng);
  MatD e = Gaussian(1, embed_dim, 1.0, rng);
  // Unit-scale loss keeps finite-difference roundoff well under the floor.
  const MatD r = Gaussian(frames, dim, 1.0 / std::sqrt(double(frames * dim)), rng);
  const double eps = 1e-5;

  model::NormCache<double> cache;
  model::NormForward(n, x, &e, eps, &cache);
  model::Norm<double> g;
  g.gamma = MatD::Zero(1, dim);
  g.beta = MatD::Zero(1, dim);
  g.cond = model::Conditioning<double>{{MatD::Zero(dim, embed_dim), MatD::Zero(1, dim)},
                                       {MatD::Zero(dim, embed_dim), MatD::Zero(1, dim)}};
  MatD de = MatD::Zero(1, embed_dim);
  const MatD dx = model::NormBackward(n, cache, r, &g, &de);

  auto loss = [&] {
    return (r.array() * model::NormForward(n, x, &e, eps, static_cast<model::NormCache<double> *>(nullptr)).array()).sum();
  };
  GradCheckResult res;
  CompareTensor("gamma", n.gamma, g.gamma, loss, opt, rng, res);
  CompareTensor("beta", n.beta, g.beta, loss, opt, rng, res);
  CompareTensor("cond_scale.w", n.cond->scale.w, g.cond->scale.w, loss, opt, rng, res);
  CompareTensor("cond_scale.b", n.cond->scale.b, g.cond->scale.b, loss, opt, rng, res);
  CompareTensor("cond_shift.w", n.cond->shift.w, g.cond->shift.w, loss, opt, rng, res);
  CompareTensor("cond_shift.b", n.cond->shift.b, g.cond->shift.b, loss, opt, rng, res);
  CompareTensor("x", x, dx, loss, opt, rng, res);
  CompareTensor("e", e, de, loss, opt, rng, res);
  return res;
}

GradCheckResult CheckSatlGradients(int frames, int dim, const GradCheckOptions &opt) {
  Rng rng = MakeRng(opt.seed, {0xa7, std::uint64_t(frames), std::uint64_t(dim)});
  const model::ModelConfig cfg = SmallConfig(dim);
  Params<double> p = RandomParams(cfg, rng);
  model::Layer<double> &layer = p.layers[0];
  MatD x = Gaussian(frames, dim, 1.0, rng);
  MatD e = Gaussian(1, cfg.E, 1.0, rng);
  // Unit-scale loss keeps finite-difference roundoff well under the floor.
  const MatD r = Gaussian(frames, dim, 1.0 / std::sqrt(double(frames * dim)), rng);

  model::LayerCache<double> cache;
  model::LayerForward(layer, x, &e, cfg, &cache);
  Params<double> grads = model::AllocateParams<double>(cfg);
  MatD de = MatD::Zero(1, cfg.E);
  const MatD dx = model::LayerBackward(layer, cache, r, cfg, &grads.layers[0], &de);

  auto loss = [&] {
    return (r.array() *
            model::LayerForward(layer, x, &e, cfg, static_cast<model::LayerCache<double> *>(nullptr))
                .array())
        .sum();
  };
  GradCheckResult res;
  auto visit = [&](const std::string &name, MatD &t, MatD &gt) {
    CompareTensor(name, t, gt, loss, opt, rng, res);
  };
  model::detail::VisitLayer(visit, "satl", layer, grads.layers[0]);
  CompareTensor("x", x, dx, loss, opt, rng, res);
  CompareTensor("e", e, de, loss, opt, rng, res);
  return res;
}

GradCheckResult CheckSmbGradients(int frames, int dim, const GradCheckOptions &opt) {
  Rng rng = MakeRng(opt.seed, {0x5b, std::uint64_t(frames), std::uint64_t(dim)});
  const model::ModelConfig cfg = SmallConfig(dim);
  Params<double> p = RandomParams(cfg, rng);
  MatD a = Gaussian(frames, dim, 1.0, rng);
  MatD b = Gaussian(frames, dim, 1.0, rng);
  // Unit-scale loss keeps finite-difference roundoff well under the floor.
  const MatD r = Gaussian(frames, dim, 1.0 / std::sqrt(double(frames * dim)), rng);

  model::MergeCache<double> cache;
  model::SmbMerge(p, cfg, a, b, &cache);
  Params<double> grads = model::AllocateParams<double>(cfg);
  auto [da, db] = model::SmbMergeBackward(p, cfg, cache, r, &grads);

  auto loss = [&] { return (r.array() * model::SmbMerge(p, cfg, a, b).array()).sum(); };
  GradCheckResult res;
  auto visit = [&](const std::string &name, MatD &t, MatD &gt) {
    CompareTensor(name, t, gt, loss, opt, rng, res);
  };
  model::detail::VisitLinear(visit, "merge.proj", p.merge_proj, grads.merge_proj);
  model::detail::VisitLayer(visit, "merge.layer", p.merge_layer, grads.merge_layer);
  CompareTensor("first", a, da, loss, opt, rng, res);
  CompareTensor("second", b, db, loss, opt, rng, res);
  return res;
}

GradCheckResult CheckSaLossGradients(int frames, int vocabulary, const GradCheckOptions &opt) {
  Rng rng = MakeRng(opt.seed, {0x10, std::uint64_t(frames), std::uint64_t(vocabulary)});
  MatD z1 = Gaussian(frames, vocabulary, 2.0, rng);
  MatD z2 = Gaussian(frames, vocabulary, 2.0, rng);
  labeler::PseudoLabelSeq l1, l2;
  std::vector<int> masked;
  for (int t = 0; t < frames; ++t) {
    l1.labels.push_back(int(UniformIndex(rng, std::size_t(vocabulary))));
    l2.labels.push_back(int(UniformIndex(rng, std::size_t(vocabulary))));
    if (t == 0 || Bernoulli(rng, 0.5)) masked.push_back(t);
  }
  const auto mask = model::MaskSpec::FromIndices(frames, masked);
  MatD d1, d2;
  model::SaLoss(z1, z2, l1, l2, mask, &d1, &d2);
  auto loss = [&] { return model::SaLoss(z1, z2, l1, l2, mask).total; };
  GradCheckResult res;
  CompareTensor("z1", z1, d1, loss, opt, rng, res);
  CompareTensor("z2", z2, d2, loss, opt, rng, res);
  return res;
}

}  // namespace samix::evalkit
