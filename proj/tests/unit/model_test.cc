// samix/tests/unit/model_test.cc

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

#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "samix/common/error.h"
#include "samix/labeler/codebook.h"
#include "samix/mixsim/scenario.h"
#include "samix/model/checkpoint.h"
#include "samix/model/config.h"
#include "samix/model/encoder.h"
#include "samix/model/loss.h"
#include "samix/model/masking.h"
#include "samix/model/network.h"
#include "samix/model/ops.h"
#include "samix/model/params.h"
#include "samix/model/sate.h"
#include "samix/model/shuffle.h"
#include "samix/model/speaker.h"
#include "test_util.h"

namespace samix::model {
namespace {

using testing::RandomMat;
using testing::TempDir;

ModelConfig Small() {
  ModelConfig c;
  c.D = 16;
  c.E = 8;
  c.layer_count = 2;
  c.attention_heads = 2;
  c.ffn_dim = 32;
  c.K = 4;
  c.conv_channels = 8;
  c.pos_conv_kernel = 5;
  return c;
}

// Random conditioning so the speaker-adapted norms depend on e.
void Perturb(Params<double> &p, std::uint64_t seed) {
  Rng rng = MakeRng(seed, {7});
  for (auto *l : {&p.layers[0]})
    for (auto *n : {&l->norm1, &l->norm2}) {
      n->cond->scale.w = RandomMat(n->cond->scale.w.rows(), n->cond->scale.w.cols(), rng, 0.5);
      n->cond->shift.w = RandomMat(n->cond->shift.w.rows(), n->cond->shift.w.cols(), rng, 0.5);
    }
}

std::vector<double> Noise(std::size_t n, std::uint64_t seed) {
  Rng rng = MakeRng(seed, {3});
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> x(n);
  for (auto &v : x) v = d(rng);
  return x;
}

labeler::PseudoLabelSeq Seq(std::vector<int> v) { return {std::move(v)}; }

// Reference CE for one frame written from the definition.
double FrameCe(const MatD &z, int t, int u) {
  double m = z.row(t).maxCoeff();
  double s = 0.0;
  for (int j = 0; j < z.cols(); ++j) s += std::exp(z(t, j) - m);
  return -(z(t, u) - m - std::log(s));
}

TEST(ModelConfigTest, Defaults) {
  ModelConfig c;
  EXPECT_EQ(c.D, 64);
  EXPECT_EQ(c.K, 32);
  EXPECT_EQ(c.vocabulary(), 33);
  EXPECT_EQ(c.satl_layer_index, 1);
  EXPECT_EQ(c.total_stride(), 320);
  EXPECT_DOUBLE_EQ(c.mask_start_prob, 0.065);
  EXPECT_EQ(c.mask_span, 10);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ModelConfigTest, RejectsBadValues) {
  ModelConfig c;
  c.satl_layer_index = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = ModelConfig{};
  c.conv_strides = {8, 5, 4, 1};
  EXPECT_THROW(c.Validate(), Error);
  c = ModelConfig{};
  c.attention_heads = 5;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(ModelConfigTest, JsonRoundTrip) {
  ModelConfig c = Small();
  EXPECT_EQ(ModelConfigFromJson(ToJson(c)), c);
}

TEST(NormTest, LayerNormExample) {
  Norm<double> n;
  n.gamma = MatD::Ones(1, 2);
  n.beta = MatD::Zero(1, 2);
  MatD x(1, 2);
  x << 1.0, 3.0;
  MatD y = NormForward<double>(n, x, nullptr, 1e-5, nullptr);
  const double want = 1.0 / std::sqrt(1.0 + 1e-5);
  EXPECT_NEAR(y(0, 0), -want, 1e-12);
  EXPECT_NEAR(y(0, 1), want, 1e-12);
  EXPECT_NEAR(y(0, 1), 0.99999, 1e-5);
}

TEST(NormTest, ConstantRowGivesBeta) {
  Norm<double> n;
  n.gamma = MatD::Zero(1, 3);
  n.beta = MatD::Constant(1, 3, 5.0);
  MatD x = MatD::Constant(2, 3, 4.0);
  MatD y = NormForward<double>(n, x, nullptr, 1e-5, nullptr);
  EXPECT_TRUE(y.isApprox(MatD::Constant(2, 3, 5.0)));
  n.gamma.setOnes();
  n.beta.setZero();
  y = NormForward<double>(n, x, nullptr, 1e-5, nullptr);
  EXPECT_LT(y.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NormTest, NormalizedRowsHaveZeroMeanUnitVariance) {
  Rng rng = MakeRng(1, {});
  for (int d : {8, 16, 64}) {
    MatD x = RandomMat(20, d, rng, 3.0).array() + 7.0;
    MatD y = NormalizeRows<double>(x, 1e-5);
    for (int t = 0; t < y.rows(); ++t) {
      double mean = y.row(t).mean();
      double var = (y.row(t).array() - mean).square().mean();
      EXPECT_LT(std::abs(mean), 1e-5);
      EXPECT_NEAR(var, 1.0, 1e-4);
    }
  }
}

Norm<double> CondNorm(int d, int e, Rng &rng) {
  Norm<double> n;
  n.gamma = RandomMat(1, d, rng);
  n.beta = RandomMat(1, d, rng);
  n.cond.emplace();
  n.cond->scale.w = MatD::Zero(d, e);
  n.cond->scale.b = MatD::Ones(1, d);
  n.cond->shift.w = MatD::Zero(d, e);
  n.cond->shift.b = MatD::Zero(1, d);
  return n;
}

TEST(NormTest, ConditionalCollapsesToPlain) {
  Rng rng = MakeRng(2, {});
  Norm<double> cn = CondNorm(6, 4, rng);
  Norm<double> plain{cn.gamma, cn.beta, std::nullopt};
  MatD x = RandomMat(9, 6, rng);
  MatD e1 = RandomMat(1, 4, rng), e2 = RandomMat(1, 4, rng);
  MatD ref = NormForward<double>(plain, x, nullptr, 1e-5, nullptr);
  EXPECT_LT((NormForward<double>(cn, x, &e1, 1e-5, nullptr) - ref).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((NormForward<double>(cn, x, &e2, 1e-5, nullptr) - ref).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(NormTest, ConditionalScaleExample) {
  Norm<double> n;
  n.gamma = MatD::Ones(1, 2);
  n.beta = MatD::Zero(1, 2);
  n.cond.emplace();
  n.cond->scale.w = MatD::Zero(2, 3);
  n.cond->scale.b = MatD::Constant(1, 2, 2.0);
  n.cond->shift.w = MatD::Zero(2, 3);
  n.cond->shift.b = MatD::Zero(1, 2);
  MatD x(1, 2);
  x << 1.0, 3.0;
  MatD e = MatD::Ones(1, 3);
  MatD y = NormForward<double>(n, x, &e, 1e-5, nullptr);
  EXPECT_NEAR(y(0, 0), -2.0, 1e-4);
  EXPECT_NEAR(y(0, 1), 2.0, 1e-4);
}

TEST(NormTest, ConditionalDependsOnEmbedding) {
  Rng rng = MakeRng(3, {});
  Norm<double> n = CondNorm(6, 4, rng);
  n.cond->scale.w = RandomMat(6, 4, rng);
  MatD x = RandomMat(5, 6, rng);
  MatD e1 = RandomMat(1, 4, rng), e2 = RandomMat(1, 4, rng);
  MatD y1 = NormForward<double>(n, x, &e1, 1e-5, nullptr);
  MatD y2 = NormForward<double>(n, x, &e2, 1e-5, nullptr);
  EXPECT_GT((y1 - y2).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(EncoderTest, FrameCountIsPinned) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 1);
  EXPECT_EQ(c.FrameCount(16000), 50);
  EXPECT_EQ(EncodeFrames<double>(p, c, Noise(16000, 1)).rows(), 50);
  EXPECT_EQ(EncodeFrames<double>(p, c, Noise(32000, 1)).rows(), 100);
  EXPECT_EQ(EncodeFrames<double>(p, c, Noise(16000, 1)).cols(), c.D);
}

TEST(EncoderTest, ZeroInputGivesZeroFeatures) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 1);
  MatD f = EncodeFrames<double>(p, c, std::vector<double>(16000, 0.0));
  EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EncoderTest, AudioClipOverloadIsUnmasked) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 1);
  AudioClip clip = testing::Clip(Noise(8000, 2), "s", "u");
  FrameFeatures<double> f = EncodeFrames<double>(p, c, clip);
  EXPECT_FALSE(f.masked);
  EXPECT_EQ(f.values.rows(), 25);
}

TEST(MaskingTest, ZeroProbabilityLeavesFeatures) {
  Rng rng = MakeRng(4, {});
  MatD f = RandomMat(50, 4, rng);
  MaskSpec m = SampleMask(50, 0.0, 10, rng);
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(ApplyMask<double>(f, m, MatD::Ones(1, 4)), f);
}

TEST(MaskingTest, FullProbabilityMasksEverything) {
  Rng rng = MakeRng(5, {});
  MatD f = RandomMat(50, 4, rng);
  MatD emb = RandomMat(1, 4, rng);
  MaskSpec m = SampleMask(50, 1.0, 50, rng);
  EXPECT_EQ(m.size(), 50u);
  MatD out = ApplyMask<double>(f, m, emb);
  for (int t = 0; t < 50; ++t) EXPECT_EQ(out.row(t), emb);
}

TEST(MaskingTest, OnlyMaskedRowsChange) {
  Rng rng = MakeRng(6, {});
  MatD f = RandomMat(40, 3, rng);
  MaskSpec m = MaskSpec::FromIndices(40, {3, 4, 20});
  MatD out = ApplyMask<double>(f, m, MatD::Constant(1, 3, 9.0));
  for (int t = 0; t < 40; ++t) {
    if (m.Contains(t))
      EXPECT_EQ(out.row(t), MatD::Constant(1, 3, 9.0));
    else
      EXPECT_EQ(out.row(t), f.row(t));
  }
}

TEST(MaskingTest, CoverageMatchesAnalyticExpectation) {
  const int T = 500, span = 10, trials = 200;
  const double p = 0.065;
  // Frame t is covered unless none of the min(t+1, span) starts reaching it fire.
  double expected = 0.0;
  for (int t = 0; t < T; ++t) expected += 1.0 - std::pow(1.0 - p, std::min(t + 1, span));
  expected /= T;
  Rng rng = MakeRng(7, {});
  double acc = 0.0;
  for (int i = 0; i < trials; ++i) acc += double(SampleMask(T, p, span, rng).size()) / T;
  EXPECT_NEAR(acc / trials, expected, 0.03);
}

TEST(MaskingTest, RejectsBadArguments) {
  Rng rng = MakeRng(8, {});
  EXPECT_THROW(SampleMask(10, 1.5, 2, rng), Error);
  EXPECT_THROW(SampleMask(10, 0.5, 0, rng), Error);
  Rng r2 = MakeRng(8, {});
  MatD f = RandomMat(10, 2, r2);
  EXPECT_THROW(ApplyMask<double>(f, MaskSpec::FromIndices(12, {1}), MatD::Zero(1, 2)), Error);
}

TEST(LayerTest, ZeroWeightsAreIdentity) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 9);
  Layer<double> l = p.layers[1];
  l.attn.o.w.setZero();
  l.attn.o.b.setZero();
  l.ffn.out.w.setZero();
  l.ffn.out.b.setZero();
  Rng rng = MakeRng(9, {});
  MatD h = RandomMat(12, c.D, rng);
  EXPECT_LT((LayerForward<double>(l, h, nullptr, c, nullptr) - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LayerTest, CollapsedSatlMatchesPlainLayer) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 10);
  Layer<double> satl = p.layers[0];
  ASSERT_TRUE(satl.norm1.cond.has_value());
  Layer<double> plain = satl;
  plain.norm1.cond.reset();
  plain.norm2.cond.reset();
  Rng rng = MakeRng(10, {});
  MatD h = RandomMat(12, c.D, rng);
  MatD e = RandomMat(1, c.E, rng);
  MatD a = LayerForward<double>(satl, h, &e, c, nullptr);
  MatD b = LayerForward<double>(plain, h, nullptr, c, nullptr);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(LayerTest, OnlyConfiguredLayerIsConditioned) {
  ModelConfig c = Small();
  c.layer_count = 3;
  c.satl_layer_index = 2;
  Params<double> p = InitParams<double>(c, 11);
  EXPECT_FALSE(p.layers[0].norm1.cond.has_value());
  EXPECT_TRUE(p.layers[1].norm1.cond.has_value());
  EXPECT_TRUE(p.layers[1].norm2.cond.has_value());
  EXPECT_FALSE(p.layers[2].norm1.cond.has_value());
  EXPECT_FALSE(p.merge_layer.norm1.cond.has_value());
}

TEST(SateTest, ExtractDependsOnEmbeddingAndIsDeterministic) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 12);
  Perturb(p, 12);
  Rng rng = MakeRng(12, {});
  MatD x = RandomMat(30, c.D, rng);
  MatD e1 = LookupEmbedding("a", c.E).vector, e2 = LookupEmbedding("b", c.E).vector;
  std::vector<MatD> hidden;
  MatD c1 = SateExtract<double>(p, c, x, &e1, nullptr, &hidden);
  MatD c1b = SateExtract<double>(p, c, x, &e1);
  MatD c2 = SateExtract<double>(p, c, x, &e2);
  EXPECT_EQ(c1, c1b);
  EXPECT_GT((c1 - c2).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(int(hidden.size()), c.layer_count + 1);
  EXPECT_EQ(c1.rows(), 30);
  EXPECT_EQ(c1.cols(), c.D);
}

TEST(SmbTest, MergeIsOrderSensitive) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 13);
  Rng rng = MakeRng(13, {});
  MatD a = RandomMat(20, c.D, rng), b = RandomMat(20, c.D, rng);
  MatD ab = SmbMerge<double>(p, c, a, b), ba = SmbMerge<double>(p, c, b, a);
  EXPECT_EQ(ab.rows(), 20);
  EXPECT_GT((ab - ba).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(SmbTest, IdentityProjectionPassesFirstInput) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 14);
  // merge_proj.w is D x 2D; [I 0] selects the first stream.
  p.merge_proj.w.setZero();
  p.merge_proj.w.leftCols(c.D).setIdentity();
  p.merge_proj.b.setZero();
  p.merge_layer.attn.o.w.setZero();
  p.merge_layer.attn.o.b.setZero();
  p.merge_layer.ffn.out.w.setZero();
  p.merge_layer.ffn.out.b.setZero();
  Rng rng = MakeRng(14, {});
  MatD a = RandomMat(20, c.D, rng), b = RandomMat(20, c.D, rng);
  EXPECT_LT((SmbMerge<double>(p, c, a, b) - a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HeadsTest, ShapesBiasAndIndependence) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 15);
  Rng rng = MakeRng(15, {});
  MatD m = RandomMat(7, c.D, rng);
  auto [z1, z2] = PredictHeads<double>(p, m);
  EXPECT_EQ(z1.rows(), 7);
  EXPECT_EQ(z1.cols(), c.vocabulary());
  EXPECT_GT((z1 - z2).cwiseAbs().maxCoeff(), 1e-3);
  p.head1.w.setZero();
  p.head1.b = RandomMat(1, c.vocabulary(), rng);
  auto [y1, y2] = PredictHeads<double>(p, m);
  for (int t = 0; t < 7; ++t) EXPECT_EQ(y1.row(t), p.head1.b);
  EXPECT_EQ(y2, z2);
  EXPECT_THROW(CheckVocabulary(c, c.vocabulary() + 1), Error);
  EXPECT_NO_THROW(CheckVocabulary(c, c.vocabulary()));
}

TEST(LossTest, UniformLogitsGiveTwoLogVocabulary) {
  const int T = 20, V = 33;
  MatD z = MatD::Zero(T, V);
  std::vector<int> l1(T), l2(T);
  for (int t = 0; t < T; ++t) l1[std::size_t(t)] = t % V, l2[std::size_t(t)] = (3 * t) % V;
  MaskSpec m = MaskSpec::FromIndices(T, {0, 1, 2, 9, 15});
  SaLossResult r = SaLoss<double>(z, z, Seq(l1), Seq(l2), m);
  EXPECT_NEAR(r.total, 2.0 * std::log(33.0), 1e-9);
  EXPECT_NEAR(r.ce[0], std::log(33.0), 1e-9);
}

TEST(LossTest, ConfidentCorrectLogitsGiveNearZero) {
  const int T = 6, V = 33;
  std::vector<int> l1{0, 5, 32, 7, 7, 1}, l2{32, 32, 4, 2, 9, 0};
  MatD z1 = MatD::Zero(T, V), z2 = MatD::Zero(T, V);
  for (int t = 0; t < T; ++t) z1(t, l1[std::size_t(t)]) = 50, z2(t, l2[std::size_t(t)]) = 50;
  MaskSpec m = MaskSpec::FromIndices(T, {0, 1, 2, 3, 4, 5});
  SaLossResult r = SaLoss<double>(z1, z2, Seq(l1), Seq(l2), m);
  EXPECT_LT(r.total, 1e-8);
  EXPECT_DOUBLE_EQ(r.accuracy[0], 1.0);
  EXPECT_DOUBLE_EQ(r.accuracy[1], 1.0);
}

TEST(LossTest, MatchesHandComputedOracle) {
  Rng rng = MakeRng(16, {});
  const int T = 3, V = 4;  // K = 3
  MatD z1 = RandomMat(T, V, rng), z2 = RandomMat(T, V, rng);
  std::vector<int> l1{0, 3, 2}, l2{1, 1, 3};
  MaskSpec m = MaskSpec::FromIndices(T, {0, 2});
  double want1 = (FrameCe(z1, 0, 0) + FrameCe(z1, 2, 2)) / 2.0;
  double want2 = (FrameCe(z2, 0, 1) + FrameCe(z2, 2, 3)) / 2.0;
  SaLossResult r = SaLoss<double>(z1, z2, Seq(l1), Seq(l2), m);
  EXPECT_NEAR(r.ce[0], want1, 1e-10);
  EXPECT_NEAR(r.ce[1], want2, 1e-10);
  EXPECT_NEAR(r.total, want1 + want2, 1e-10);
}

TEST(LossTest, LogitGradientMatchesSoftmaxMinusOneHot) {
  Rng rng = MakeRng(17, {});
  MatD z = RandomMat(4, 5, rng);
  std::vector<int> l{1, 4, 0, 2};
  MaskSpec m = MaskSpec::FromIndices(4, {1, 3});
  MatD dz;
  MaskedCrossEntropy<double>(z, Seq(l), m, &dz);
  MatD p = RowSoftmax<double>(z);
  for (int t = 0; t < 4; ++t)
    for (int j = 0; j < 5; ++j) {
      double want = m.Contains(t) ? (p(t, j) - (j == l[std::size_t(t)] ? 1.0 : 0.0)) / 2.0 : 0.0;
      EXPECT_NEAR(dz(t, j), want, 1e-12);
    }
}

TEST(LossTest, EmptyMaskOrBadLabelsThrow) {
  MatD z = MatD::Zero(3, 4);
  EXPECT_THROW(MaskedCrossEntropy<double>(z, Seq({0, 1, 2}), MaskSpec::FromIndices(3, {})),
               Error);
  EXPECT_THROW(MaskedCrossEntropy<double>(z, Seq({0, 1}), MaskSpec::FromIndices(3, {0})), Error);
  EXPECT_THROW(MaskedCrossEntropy<double>(z, Seq({0, 9, 1}), MaskSpec::FromIndices(3, {1})),
               Error);
}

TEST(BaselineLossTest, UniformAndHalfOfDuplicatedSaLoss) {
  const int T = 10, V = 33;
  MatD z = MatD::Zero(T, V);
  std::vector<int> l(T, 4);
  MaskSpec m = MaskSpec::FromIndices(T, {2, 3, 4});
  EXPECT_NEAR(BaselineLoss<double>(z, Seq(l), m).ce, std::log(33.0), 1e-9);
  Rng rng = MakeRng(18, {});
  MatD r = RandomMat(T, V, rng);
  double sa = SaLoss<double>(r, r, Seq(l), Seq(l), m).total;
  EXPECT_NEAR(BaselineLoss<double>(r, Seq(l), m).ce, sa / 2.0, 1e-12);
}

TEST(NetworkTest, SaItemLossEvaluatesTwoCrossEntropies) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 19);
  std::vector<double> x = Noise(16000, 19);
  SlotPair slots;
  slots[0] = {LookupEmbedding("a", c.E), Seq(std::vector<int>(50, 1))};
  slots[1] = {LookupEmbedding("b", c.E), Seq(std::vector<int>(50, 2))};
  MaskSpec m = MaskSpec::FromIndices(50, {4, 5, 6, 30});
  ResetCrossEntropyEvaluations();
  for (int i = 0; i < 5; ++i) SaItemLoss<double>(p, c, x, m, slots);
  EXPECT_EQ(CrossEntropyEvaluations(), 10u);
}

TEST(NetworkTest, ForwardIsDeterministic) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 20);
  std::vector<double> x = Noise(16000, 20);
  auto a = PredictPair<double>(p, c, x, LookupEmbedding("a", c.E), LookupEmbedding("b", c.E));
  auto b = PredictPair<double>(p, c, x, LookupEmbedding("a", c.E), LookupEmbedding("b", c.E));
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_EQ(a.first.rows(), 50);
}

TEST(NetworkTest, NonSpeakerSlotUsesLearnedVector) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 21);
  RowVec<double> other = RowVec<double>::Ones(c.E);
  EXPECT_EQ(SlotVector<double>(p, NonSpeakerEmbedding(other)), p.non_speaker);
  SpeakerEmbedding wrong{RowVec<double>::Ones(c.E + 1), EmbeddingKind::kReal, "x"};
  EXPECT_THROW(SlotVector<double>(p, wrong), Error);
}

labeler::Codebook TinyCodebook(int K) {
  labeler::Codebook cb;
  cb.centroids = MatD::Zero(K, 2);
  return cb;
}

TEST(ShuffleTest, SwapFrequencyAndIntegrity) {
  const ModelConfig c = Small();
  labeler::Codebook cb = TinyCodebook(c.K);
  std::vector<SpeakerSlot> real{{LookupEmbedding("a", c.E), Seq({0, 1, 2})},
                                {LookupEmbedding("b", c.E), Seq({3, 3, 1})}};
  Rng rng = MakeRng(22, {});
  int swaps = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    ShuffleOutcome o = ShuffleSlots(mixsim::ScenarioKind::kOverlap, real, rng, 0.5,
                                    RowVec<double>::Zero(c.E), cb, {});
    swaps += o.swapped;
    const int a = o.swapped ? 1 : 0;
    EXPECT_EQ(o.slots[std::size_t(a)].embedding.speaker_id, "a");
    EXPECT_EQ(o.slots[std::size_t(a)].labels, real[0].labels);
    EXPECT_EQ(o.slots[std::size_t(1 - a)].labels, real[1].labels);
  }
  EXPECT_NEAR(double(swaps) / n, 0.5, 0.02);
}

TEST(ShuffleTest, AbsentSlotDistractorRate) {
  const ModelConfig c = Small();
  labeler::Codebook cb = TinyCodebook(c.K);
  std::vector<SpeakerEmbedding> pool{LookupEmbedding("x", c.E), LookupEmbedding("y", c.E)};
  RowVec<double> es = RowVec<double>::Constant(c.E, 0.1);
  Rng rng = MakeRng(23, {});
  const int n = 10000;
  int distractors = 0;
  for (int i = 0; i < n; ++i) {
    ShuffleOutcome o = ShuffleSlots(mixsim::ScenarioKind::kClean,
                                    {{LookupEmbedding("a", c.E), Seq({0, 1, 2, 3})}}, rng, 0.5,
                                    es, cb, pool);
    int absent = 0;
    for (int s = 0; s < 2; ++s) {
      const SpeakerSlot &slot = o.slots[std::size_t(s)];
      if (slot.embedding.kind == EmbeddingKind::kReal) continue;
      ++absent;
      EXPECT_EQ(slot.labels, Seq({c.K, c.K, c.K, c.K}));
      distractors += slot.embedding.kind == EmbeddingKind::kDistractor;
    }
    EXPECT_EQ(absent, 1);
  }
  EXPECT_NEAR(double(distractors) / n, 0.5, 0.02);
}

TEST(ShuffleTest, AlphaEdgeCases) {
  const ModelConfig c = Small();
  labeler::Codebook cb = TinyCodebook(c.K);
  std::vector<SpeakerEmbedding> pool{LookupEmbedding("x", c.E)};
  Rng rng = MakeRng(24, {});
  for (int i = 0; i < 200; ++i) {
    auto one = ShuffleSlots(mixsim::ScenarioKind::kNoisySingle,
                            {{LookupEmbedding("a", c.E), Seq({1, 1})}}, rng, 1.0,
                            RowVec<double>::Zero(c.E), cb, pool, false);
    EXPECT_EQ(one.slots[1].embedding.kind, EmbeddingKind::kDistractor);
    EXPECT_EQ(one.slots[1].labels, Seq({c.K, c.K}));
    EXPECT_FALSE(one.swapped);
    auto zero = ShuffleSlots(mixsim::ScenarioKind::kNoisySingle,
                             {{LookupEmbedding("a", c.E), Seq({1, 1})}}, rng, 0.0,
                             RowVec<double>::Zero(c.E), cb, pool, false);
    EXPECT_EQ(zero.slots[1].embedding.kind, EmbeddingKind::kNonSpeaker);
  }
  EXPECT_THROW(ShuffleSlots(mixsim::ScenarioKind::kClean, {{LookupEmbedding("a", c.E), Seq({1})}},
                            rng, 1.5, RowVec<double>::Zero(c.E), cb, pool),
               Error);
  EXPECT_THROW(ShuffleSlots(mixsim::ScenarioKind::kOverlap,
                            {{LookupEmbedding("a", c.E), Seq({1})}}, rng, 0.5,
                            RowVec<double>::Zero(c.E), cb, pool),
               Error);
}

TEST(SpeakerTest, LookupIsUnitNormDeterministicAndDistinct) {
  SpeakerEmbedding a = LookupEmbedding("spk01", 32), a2 = LookupEmbedding("spk01", 32);
  EXPECT_NEAR(a.vector.norm(), 1.0, 1e-12);
  EXPECT_EQ(a.vector, a2.vector);
  std::vector<std::string> ids;
  for (int i = 0; i < 40; ++i) ids.push_back("spk" + std::to_string(i));
  EmbeddingTable table(ids, 32);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      EXPECT_LT(table.at(ids[i]).vector.dot(table.at(ids[j]).vector), 0.99);
  EXPECT_EQ(table.Except("spk3").size(), ids.size() - 1);
}

TEST(SpeakerTest, EnrollmentEmbeddingIsUnitNorm) {
  ModelConfig c = Small();
  Params<double> p = InitParams<double>(c, 25);
  AudioClip clip = testing::Clip(Noise(32000, 25), "a", "u");
  SpeakerEmbedding e = EnrollmentEmbedding<double>(clip, p, c);
  EXPECT_EQ(e.vector.size(), c.E);
  EXPECT_NEAR(e.vector.norm(), 1.0, 1e-9);
  EXPECT_EQ(ParseEmbeddingMode(EmbeddingModeName(EmbeddingMode::kEnrollmentMean)),
            EmbeddingMode::kEnrollmentMean);
}

Checkpoint MakeCheckpoint(const ModelConfig &c) {
  Checkpoint ck;
  ck.model = c;
  ck.step = 17;
  ck.alpha = 0.5;
  ck.codebook_hash = "abc";
  ck.params = InitParams<float>(c, 26);
  return ck;
}

TEST(CheckpointTest, RoundTripPreservesForward) {
  ModelConfig c = Small();
  TempDir dir("ckpt");
  Checkpoint ck = MakeCheckpoint(c);
  SaveCheckpoint(dir.path() / "a.ckpt", ck);
  Checkpoint back = LoadCheckpoint(dir.path() / "a.ckpt", &c);
  EXPECT_EQ(back.step, 17);
  EXPECT_EQ(back.codebook_hash, "abc");
  EXPECT_EQ(ParamsDigest(back.params), ParamsDigest(ck.params));
  std::vector<double> x = Noise(16000, 26);
  auto e1 = LookupEmbedding("a", c.E), e2 = LookupEmbedding("b", c.E);
  auto y0 = PredictPair<float>(ck.params, c, x, e1, e2);
  auto y1 = PredictPair<float>(back.params, c, x, e1, e2);
  EXPECT_LE((y0.first - y1.first).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LE((y0.second - y1.second).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(CheckpointTest, CorruptionIsDetected) {
  ModelConfig c = Small();
  TempDir dir("ckpt");
  const auto path = dir.path() / "a.ckpt";
  SaveCheckpoint(path, MakeCheckpoint(c));
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[bytes.size() - 5] ^= 0x40;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  try {
    LoadCheckpoint(path, &c);
    FAIL() << "corrupted checkpoint loaded";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCheckpoint);
  }
}

TEST(CheckpointTest, ConfigMismatchIsRejected) {
  ModelConfig c = Small();
  TempDir dir("ckpt");
  SaveCheckpoint(dir.path() / "a.ckpt", MakeCheckpoint(c));
  ModelConfig other = c;
  other.K = 8;
  try {
    LoadCheckpoint(dir.path() / "a.ckpt", &other);
    FAIL() << "mismatched config accepted";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCheckpoint);
  }
  EXPECT_THROW(LoadCheckpoint(dir.path() / "missing.ckpt"), Error);
}

TEST(CheckpointTest, OptimizerMomentsRoundTrip) {
  ModelConfig c = Small();
  TempDir dir("ckpt");
  Checkpoint ck = MakeCheckpoint(c);
  ck.adam_m = InitParams<float>(c, 27);
  ck.adam_v = InitParams<float>(c, 28);
  SaveCheckpoint(dir.path() / "a.ckpt", ck);
  Checkpoint back = LoadCheckpoint(dir.path() / "a.ckpt");
  ASSERT_TRUE(back.adam_m && back.adam_v);
  EXPECT_EQ(ParamsDigest(*back.adam_m), ParamsDigest(*ck.adam_m));
  EXPECT_EQ(ParamsDigest(*back.adam_v), ParamsDigest(*ck.adam_v));
  ck.adam_v.reset();
  EXPECT_THROW(SaveCheckpoint(dir.path() / "b.ckpt", ck), Error);
}

TEST(ParamsTest, AllocationIsZeroAndInitIsSeeded) {
  ModelConfig c = Small();
  Params<double> z = AllocateParams<double>(c);
  EXPECT_EQ(GlobalNorm(z), 0.0);
  Params<float> a = InitParams<float>(c, 1), b = InitParams<float>(c, 1), d = InitParams<float>(c, 2);
  EXPECT_EQ(ParamsDigest(a), ParamsDigest(b));
  EXPECT_NE(ParamsDigest(a), ParamsDigest(d));
}

}  // namespace
}  // namespace samix::model
