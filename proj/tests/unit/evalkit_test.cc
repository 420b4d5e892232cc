// samix/tests/unit/evalkit_test.cc

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
#include <memory>

#include <gtest/gtest.h>

#include "samix/common/error.h"
#include "samix/evalkit/gradcheck.h"
#include "samix/evalkit/metrics.h"
#include "samix/evalkit/probe.h"
#include "samix/evalkit/report.h"
#include "samix/labeler/codebook.h"
#include "samix/labeler/features.h"
#include "samix/mixsim/synthetic.h"
#include "samix/model/checkpoint.h"
#include "samix/trainer/data.h"
#include "test_util.h"

namespace samix::evalkit {
namespace {

using testing::RandomMat;
using testing::Sine;
using testing::TempDir;

labeler::PseudoLabelSeq Seq(std::vector<int> v) { return {std::move(v)}; }

TEST(MaskedAccuracyTest, PerfectAndWrong) {
  std::vector<int> l{0, 2, 1, 3};
  MatD good = MatD::Zero(4, 4), bad = MatD::Zero(4, 4);
  for (int t = 0; t < 4; ++t) {
    good(t, l[std::size_t(t)]) = 1.0;
    bad(t, (l[std::size_t(t)] + 1) % 4) = 1.0;
  }
  model::MaskSpec m = model::MaskSpec::FromIndices(4, {0, 1, 2, 3});
  EXPECT_EQ(MaskedAccuracy<double>(good, Seq(l), m), 1.0);
  EXPECT_EQ(MaskedAccuracy<double>(bad, Seq(l), m), 0.0);
  EXPECT_FALSE(MaskedAccuracy<double>(good, Seq(l), model::MaskSpec::FromIndices(4, {})));
}

TEST(MaskedAccuracyTest, MatchesEnumeration) {
  Rng rng = MakeRng(1, {});
  MatD z = RandomMat(5, 6, rng);
  std::vector<int> l{1, 5, 0, 3, 3};
  model::MaskSpec m = model::MaskSpec::FromIndices(5, {0, 2, 3});
  int hits = 0;
  for (int t : {0, 2, 3}) {
    int best = 0;
    for (int j = 1; j < 6; ++j)
      if (z(t, j) > z(t, best)) best = j;
    hits += best == l[std::size_t(t)];
  }
  EXPECT_DOUBLE_EQ(*MaskedAccuracy<double>(z, Seq(l), m), hits / 3.0);
}

TEST(SiSdrTest, CapAndScaleInvariance) {
  std::vector<double> ref = Sine(16000, 100.0, 1.0);
  std::vector<double> twice(ref);
  for (auto &v : twice) v *= 2.0;
  EXPECT_DOUBLE_EQ(SiSdr(ref, ref), kSiSdrCapDb);
  EXPECT_DOUBLE_EQ(SiSdr(twice, ref), kSiSdrCapDb);
}

TEST(SiSdrTest, OrthogonalNoiseAtTenPercentEnergy) {
  std::vector<double> ref = Sine(16000, 100.0, 1.0);
  std::vector<double> noise = Sine(16000, 300.0, std::sqrt(0.1));
  std::vector<double> est(ref);
  for (std::size_t i = 0; i < est.size(); ++i) est[i] += noise[i];
  EXPECT_NEAR(SiSdr(est, ref), 10.0, 0.01);
  std::vector<double> scaled(est);
  for (auto &v : scaled) v *= 0.3;
  EXPECT_NEAR(SiSdr(scaled, ref), SiSdr(est, ref), 1e-9);
}

TEST(SiSdrTest, ZeroReferenceThrows) {
  std::vector<double> z(100, 0.0), x(100, 1.0);
  EXPECT_THROW(SiSdr(x, z), Error);
}

TEST(LayerWeightedSumTest, VertexIdempotenceAndOracle) {
  Rng rng = MakeRng(2, {});
  std::vector<MatD> reps{RandomMat(4, 3, rng), RandomMat(4, 3, rng), RandomMat(4, 3, rng)};
  EXPECT_EQ(LayerWeightedSum(reps, {0.0, 1.0, 0.0}), reps[1]);
  EXPECT_TRUE(LayerWeightedSum({reps[0], reps[0]}, {0.5, 0.5}).isApprox(reps[0], 1e-15));
  MatD want = 0.2 * reps[0] + 0.3 * reps[1] + 0.5 * reps[2];
  EXPECT_LT((LayerWeightedSum(reps, {0.2, 0.3, 0.5}) - want).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(LayerWeightedSum(reps, {0.5, 0.5}), Error);
}

TEST(MetricsTest, TotalVariation) {
  MatD p(1, 2), q(1, 2);
  p << 0.25, 0.75;
  q << 0.75, 0.25;
  EXPECT_DOUBLE_EQ(MeanTotalVariation(p, p), 0.0);
  EXPECT_DOUBLE_EQ(MeanTotalVariation(p, q), 0.5);
}

TEST(GradCheckTest, AllComponentsAtBothShapes) {
  for (auto [t, d] : {std::pair{4, 8}, std::pair{16, 64}}) {
    EXPECT_LT(CheckClnGradients(t, d, 8).max_rel_error, 1e-4) << t << "x" << d;
    EXPECT_LT(CheckSatlGradients(t, d).max_rel_error, 1e-4) << t << "x" << d;
    EXPECT_LT(CheckSmbGradients(t, d).max_rel_error, 1e-4) << t << "x" << d;
    GradCheckResult loss = CheckSaLossGradients(t, d);
    EXPECT_LT(loss.max_rel_error, 1e-4) << loss.worst;
    EXPECT_GT(loss.checked, 0);
  }
}

class ProbeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = std::make_unique<mixsim::Corpus>(mixsim::MakeSyntheticCorpus({}));
    ctx_ = std::make_unique<trainer::DataContext>();
    ctx_->corpus = corpus_.get();
    ctx_->model.D = 16;
    ctx_->model.E = 8;
    ctx_->model.layer_count = 2;
    ctx_->model.attention_heads = 2;
    ctx_->model.ffn_dim = 32;
    ctx_->model.K = 16;
    ctx_->model.conv_channels = 8;
    ctx_->model.pos_conv_kernel = 5;
    ctx_->codebook = trainer::FitCorpusCodebook(*corpus_, 16, 3);
  }
  static void TearDownTestSuite() {
    ctx_.reset();
    corpus_.reset();
  }
  static std::unique_ptr<mixsim::Corpus> corpus_;
  static std::unique_ptr<trainer::DataContext> ctx_;
};

std::unique_ptr<mixsim::Corpus> ProbeTest::corpus_;
std::unique_ptr<trainer::DataContext> ProbeTest::ctx_;

TEST_F(ProbeTest, CleanFeaturesWithTeacherLabelsAreNearOracle) {
  // Manifest order groups speakers; round-robin so both halves see all of them.
  std::vector<ProbeExample> examples;
  const auto &entries = corpus_->manifest.entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::size_t speakers = 4, per = entries.size() / speakers;
    const auto &e = entries[(i % speakers) * per + i / speakers];
    const AudioClip &clip = corpus_->audio->Get(e);
    ProbeExample ex;
    ex.layers.push_back(labeler::FrameSpectralFeatures(clip, ctx_->codebook.feature_cfg));
    ex.labels = labeler::AssignLabels(clip, ctx_->codebook, ctx_->codebook.feature_cfg);
    examples.push_back(std::move(ex));
  }
  ProbeResult r = TrainProbe(examples, ctx_->codebook.vocabulary(), {});
  RecordProperty("eval_accuracy", std::to_string(r.eval_accuracy));
  EXPECT_GE(r.eval_accuracy, 0.95);
  ASSERT_EQ(r.layer_weights.size(), 1u);
  EXPECT_NEAR(r.layer_weights[0], 1.0, 1e-12);
}

TEST_F(ProbeTest, ProbeLeavesParamsAndUntrainedGapIsSmall) {
  trainer::SpeakerEmbedder embedder(*ctx_, model::EmbeddingMode::kLookup, 1);
  auto items = MakeEvalSet(*ctx_, embedder, 0.5, 5, 6, mixsim::ScenarioKind::kOverlap);
  ASSERT_EQ(items.size(), 6u);
  model::Params<float> p = model::InitParams<float>(ctx_->model, 3);
  const std::string before = model::ParamsDigest(p);
  ProbeConfig pc;
  pc.epochs = 40;
  ProbeReport r = ProbeTargetLabeling(p, nullptr, ctx_->model, items,
                                      ctx_->codebook.vocabulary(), pc);
  EXPECT_EQ(model::ParamsDigest(p), before);
  EXPECT_LT(std::abs(r.gap()), 0.03);
  EXPECT_TRUE(ToJson(r).contains("correct"));
}

TEST_F(ProbeTest, OrderSwapIsDeterministicAndBounded) {
  trainer::SpeakerEmbedder embedder(*ctx_, model::EmbeddingMode::kLookup, 1);
  auto items = MakeEvalSet(*ctx_, embedder, 0.5, 6, 4);
  model::Params<float> p = model::InitParams<float>(ctx_->model, 4);
  double a = OrderSwapConsistency(p, ctx_->model, items);
  double b = OrderSwapConsistency(p, ctx_->model, items);
  EXPECT_EQ(a - b, 0.0);
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 1.0);
  SlotAccuracyReport s = EvaluateSlots(p, ctx_->model, ctx_->codebook, items, 1);
  EXPECT_EQ(s.two_speaker_items + s.one_speaker_items, 4);
}

TEST(SuiteTest, FreshParamsPassEveryCheck) {
  SuiteOptions opt;
  opt.seed = 3;
  opt.mixtures = 20;
  TempDir dir("suite");
  opt.scratch_dir = dir.path();
  EvalReport r = RunInvariantSuite(opt);
  EXPECT_EQ(r.checks.size(), InvariantCheckIds().size());
  for (const auto &c : r.checks) EXPECT_TRUE(c.passed) << c.id << ": " << c.details;
  EXPECT_TRUE(r.AllRequiredPassed());
  EXPECT_NE(r.Find("pit_free_counter"), nullptr);
  EXPECT_EQ(r.ToJson()["checks"].size(), r.checks.size());
  EXPECT_NE(r.ToTable().find("norm_core"), std::string::npos);
}

TEST(SuiteTest, ZeroedTensorFailsOnlyRoundTrip) {
  TempDir dir("suite");
  model::ModelConfig cfg;
  model::Checkpoint ck;
  ck.model = cfg;
  ck.params = model::InitParams<float>(cfg, 9);
  const auto path = dir.path() / "c.ckpt";
  model::SaveCheckpoint(path, ck);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  // The last record is the E-float non-speaker vector.
  const std::size_t n = std::size_t(cfg.E) * sizeof(float);
  std::fill(bytes.end() - std::ptrdiff_t(n), bytes.end(), '\0');
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  SuiteOptions opt;
  opt.checkpoint = path;
  opt.mixtures = 20;
  opt.scratch_dir = dir.path();
  EvalReport r = RunInvariantSuite(opt);
  EXPECT_EQ(r.checks.size(), InvariantCheckIds().size());
  for (const auto &c : r.checks) {
    if (c.id == "checkpoint_roundtrip")
      EXPECT_FALSE(c.passed);
    else
      EXPECT_TRUE(c.passed) << c.id << ": " << c.details;
  }
  EXPECT_FALSE(r.AllRequiredPassed());
}

}  // namespace
}  // namespace samix::evalkit
