// samix/evalkit/probe.cc

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

#include "samix/evalkit/probe.h"

#include <cmath>

#include "samix/common/error.h"
#include "samix/evalkit/metrics.h"
#include "samix/model/network.h"

namespace samix::evalkit {

std::vector<RenderedItem> MakeEvalSet(const trainer::DataContext &ctx,
                                      const trainer::SpeakerEmbedder &embedder, double crop_seconds,
                                      std::uint64_t seed, int count,
                                      std::optional<mixsim::ScenarioKind> kind) {
  const auto crop = std::size_t(std::llround(crop_seconds * kSampleRate));
  std::vector<RenderedItem> out;
  for (int i = 0; i < count; ++i)
    out.push_back(trainer::RenderItem(ctx, embedder, trainer::Objective::kSaWavlm, crop,
                                      DeriveSeed(seed, {0xe7a1, std::uint64_t(i)}), kind));
  return out;
}

namespace {

struct Stacked {
  std::vector<MatD> layers;  // N x D each
  std::vector<int> labels;
};

Stacked Stack(const std::vector<ProbeExample> &ex, std::size_t begin, std::size_t end) {
  Stacked s;
  if (begin >= end) return s;
  const std::size_t L = ex[begin].layers.size();
  Eigen::Index rows = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (ex[i].layers.size() != L) Fail(ErrorKind::kShape, "probe examples differ in layer count");
    const Eigen::Index T = ex[i].layers[0].rows();
    if (Eigen::Index(ex[i].labels.size()) != T)
      Fail(ErrorKind::kAlignment, "probe example " + std::to_string(i) + " has " +
                                      std::to_string(ex[i].labels.size()) + " labels for " +
                                      std::to_string(T) + " frames");
    rows += T;
  }
  const Eigen::Index D = ex[begin].layers[0].cols();
  s.layers.assign(L, MatD(rows, D));
  Eigen::Index r = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const Eigen::Index T = ex[i].layers[0].rows();
    for (std::size_t l = 0; l < L; ++l) s.layers[l].middleRows(r, T) = ex[i].layers[l];
    s.labels.insert(s.labels.end(), ex[i].labels.labels.begin(), ex[i].labels.labels.end());
    r += T;
  }
  return s;
}

RowVec<double> Softmax(const RowVec<double> &v) {
  RowVec<double> e = (v.array() - v.maxCoeff()).exp();
  return e / e.sum();
}

double Accuracy(const MatD &logits, const std::vector<int> &labels) {
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(t, c) > logits(t, best)) best = c;
    if (best == labels[std::size_t(t)]) ++hits;
  }
  return double(hits) / double(labels.size());
}

}  // namespace

ProbeResult TrainProbe(const std::vector<ProbeExample> &examples, int vocabulary,
                       const ProbeConfig &cfg) {
  if (examples.empty()) Fail(ErrorKind::kInsufficientData, "probe needs at least one example");
  std::size_t split = std::size_t(std::llround(cfg.train_fraction * double(examples.size())));
  split = std::clamp<std::size_t>(split, 1, examples.size());
  Stacked train = Stack(examples, 0, split);
  Stacked eval = split < examples.size() ? Stack(examples, split, examples.size()) : train;
  const std::size_t L = train.layers.size();
  const Eigen::Index D = train.layers[0].cols();
  const Eigen::Index N = train.layers[0].rows();
  for (int u : train.labels)
    if (u < 0 || u >= vocabulary) Fail(ErrorKind::kShape, "probe label outside vocabulary");

  // Per-layer standardization with training statistics.
  for (std::size_t l = 0; l < L; ++l) {
    RowVec<double> mean = train.layers[l].colwise().mean();
    RowVec<double> sd =
        ((train.layers[l].rowwise() - mean).array().square().colwise().mean()).sqrt() + 1e-6;
    for (Stacked *s : {&train, &eval}) {
      if (s == &eval && &eval == &train) continue;
      s->layers[l] = ((s->layers[l].rowwise() - mean).array().rowwise() / sd.array()).matrix();
    }
  }

  MatD W = MatD::Zero(vocabulary, D);
  RowVec<double> b = RowVec<double>::Zero(vocabulary);
  RowVec<double> s = RowVec<double>::Zero(Eigen::Index(L));
  MatD mW = MatD::Zero(vocabulary, D), vW = mW;
  RowVec<double> mb = b, vb = b, ms = s, vs = s;
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  auto combine = [&](const Stacked &st, const RowVec<double> &a) {
    MatD h = MatD::Zero(st.layers[0].rows(), D);
    for (std::size_t l = 0; l < L; ++l) h += a[Eigen::Index(l)] * st.layers[l];
    return h;
  };
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const RowVec<double> a = Softmax(s);
    const MatD h = combine(train, a);
    MatD z = (h * W.transpose()).rowwise() + b;
    for (Eigen::Index t = 0; t < N; ++t) {
      RowVec<double> p = Softmax(z.row(t));
      p[train.labels[std::size_t(t)]] -= 1.0;
      z.row(t) = p / double(N);
    }
    const MatD gW = z.transpose() * h;
    const RowVec<double> gb = z.colwise().sum();
    const MatD dh = z * W;
    RowVec<double> da = RowVec<double>::Zero(Eigen::Index(L));
    for (std::size_t l = 0; l < L; ++l)
      da[Eigen::Index(l)] = (dh.array() * train.layers[l].array()).sum();
    const RowVec<double> gs = a.array() * (da.array() - a.dot(da));

    const double c1 = 1.0 - std::pow(b1, epoch), c2 = 1.0 - std::pow(b2, epoch);
    auto adam = [&](auto &param, auto &m, auto &v, const auto &g) {
      m = b1 * m + (1.0 - b1) * g;
      v = (b2 * v.array() + (1.0 - b2) * g.array().square()).matrix();
      param.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    adam(W, mW, vW, gW);
    adam(b, mb, vb, gb);
    adam(s, ms, vs, gs);
  }
  ProbeResult r;
  const RowVec<double> a = Softmax(s);
  r.layer_weights.assign(a.data(), a.data() + a.size());
  r.train_accuracy = Accuracy((combine(train, a) * W.transpose()).rowwise() + b, train.labels);
  r.eval_accuracy = Accuracy((combine(eval, a) * W.transpose()).rowwise() + b, eval.labels);
  return r;
}

nlohmann::json ToJson(const ProbeReport &r) {
  auto one = [](const ProbeResult &p) {
    return nlohmann::json{{"train_accuracy", p.train_accuracy},
                          {"eval_accuracy", p.eval_accuracy},
                          {"layer_weights", p.layer_weights}};
  };
  nlohmann::json j = {{"correct", one(r.correct)}, {"interferer", one(r.interferer)},
                      {"gap", r.gap()}};
  if (r.baseline) j["baseline"] = one(*r.baseline);
  return j;
}

namespace {

std::vector<MatD> LayersD(const model::Params<float> &p, const model::ModelConfig &cfg,
                          const RenderedItem &item, const model::SpeakerEmbedding *e) {
  std::vector<MatD> out;
  for (auto &m : model::ExtractLayers(p, cfg, item.samples, e)) out.push_back(m.cast<double>());
  return out;
}

}  // namespace

ProbeReport ProbeTargetLabeling(const model::Params<float> &params,
                                const model::Params<float> *baseline,
                                const model::ModelConfig &cfg,
                                const std::vector<RenderedItem> &items, int vocabulary,
                                const ProbeConfig &probe_cfg) {
  std::vector<ProbeExample> correct, interferer, base;
  for (const auto &item : items) {
    if (item.labels.size() != 2) continue;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto &labels = item.labels[k];
      correct.push_back({LayersD(params, cfg, item, &item.embeddings[k]), labels});
      interferer.push_back({LayersD(params, cfg, item, &item.embeddings[1 - k]), labels});
      if (baseline) base.push_back({LayersD(*baseline, cfg, item, nullptr), labels});
    }
  }
  if (correct.empty()) Fail(ErrorKind::kInsufficientData, "probe needs two-speaker items");
  ProbeReport r;
  r.correct = TrainProbe(correct, vocabulary, probe_cfg);
  r.interferer = TrainProbe(interferer, vocabulary, probe_cfg);
  if (baseline) r.baseline = TrainProbe(base, vocabulary, probe_cfg);
  return r;
}

double OrderSwapConsistency(const model::Params<float> &params, const model::ModelConfig &cfg,
                            const std::vector<RenderedItem> &items) {
  if (items.empty()) Fail(ErrorKind::kInsufficientData, "order swap needs items");
  double total = 0.0;
  for (const auto &item : items) {
    const model::SpeakerEmbedding a = item.embeddings.at(0);
    const model::SpeakerEmbedding b =
        item.embeddings.size() > 1 ? item.embeddings[1]
                                   : model::NonSpeakerEmbedding(RowVec<double>::Zero(cfg.E));
    auto [z1ab, z2ab] = model::PredictPair(params, cfg, item.samples, a, b);
    auto [z1ba, z2ba] = model::PredictPair(params, cfg, item.samples, b, a);
    auto sm = [](const MatF &z) { return model::RowSoftmax(z).cast<double>().eval(); };
    total += 0.5 * (MeanTotalVariation(sm(z1ab), sm(z2ba)) + MeanTotalVariation(sm(z2ab), sm(z1ba)));
  }
  return total / double(items.size());
}

nlohmann::json ToJson(const SlotAccuracyReport &r) {
  return {{"two_speaker_slot1", r.two_speaker[0]},
          {"two_speaker_slot2", r.two_speaker[1]},
          {"one_speaker_real", r.one_speaker_real},
          {"one_speaker_absent", r.one_speaker_absent},
          {"two_speaker_items", r.two_speaker_items},
          {"one_speaker_items", r.one_speaker_items}};
}

SlotAccuracyReport EvaluateSlots(const model::Params<float> &params, const model::ModelConfig &cfg,
                                 const labeler::Codebook &codebook,
                                 const std::vector<RenderedItem> &items, std::uint64_t seed) {
  SlotAccuracyReport r;
  trainer::TrainConfig tc;
  tc.alpha = 0.0;
  tc.shuffle = true;
  for (std::size_t i = 0; i < items.size(); ++i) {
    Rng rng = MakeRng(seed, {0x51a7, i});
    const auto &item = items[i];
    const auto mask = trainer::DrawNonEmptyMask(item.frames(), cfg, rng);
    const auto outcome = trainer::BuildSlots(item, tc, codebook, rng);
    const auto loss = model::SaItemLoss(params, cfg, item.samples, mask, outcome.slots);
    if (mixsim::IsTwoSpeaker(item.scenario.kind)) {
      r.two_speaker[0] += loss.accuracy[0];
      r.two_speaker[1] += loss.accuracy[1];
      ++r.two_speaker_items;
    } else {
      const int real = outcome.slots[0].embedding.kind == model::EmbeddingKind::kNonSpeaker ? 1 : 0;
      r.one_speaker_real += loss.accuracy[std::size_t(real)];
      r.one_speaker_absent += loss.accuracy[std::size_t(1 - real)];
      ++r.one_speaker_items;
    }
  }
  if (r.two_speaker_items) {
    r.two_speaker[0] /= r.two_speaker_items;
    r.two_speaker[1] /= r.two_speaker_items;
  }
  if (r.one_speaker_items) {
    r.one_speaker_real /= r.one_speaker_items;
    r.one_speaker_absent /= r.one_speaker_items;
  }
  return r;
}

}  // namespace samix::evalkit
