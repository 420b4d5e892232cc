// samix/tests/unit/labeler_test.cc

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

#include <cstring>
#include <fstream>
#include <iterator>

#include <gtest/gtest.h>

#include "samix/common/error.h"
#include "samix/labeler/codebook.h"
#include "samix/labeler/features.h"
#include "samix/model/config.h"
#include "test_util.h"

namespace samix::labeler {
namespace {

using testing::Clip;
using testing::Sine;

TEST(Features, OneSecondGives49Frames) {
  FeatureConfig cfg;
  // (16000 - 400) / 320 + 1
  EXPECT_EQ(cfg.FrameCount(16000), 49);
  const MatD f = FrameSpectralFeatures(Clip(Sine(16000, 440.0), "s", "u"), cfg);
  EXPECT_EQ(f.rows(), 49);
  EXPECT_EQ(f.cols(), 39);
}

TEST(Features, SilenceIsFinite) {
  const MatD f = FrameSpectralFeatures(Clip(std::vector<double>(8000, 0.0), "s", "u"));
  EXPECT_TRUE(f.allFinite());
}

TEST(Features, Deterministic) {
  const AudioClip c = Clip(Sine(9000, 321.0), "s", "u");
  EXPECT_EQ(FrameSpectralFeatures(c), FrameSpectralFeatures(c));
}

TEST(Features, TooShortClip) {
  try {
    FrameSpectralFeatures(Clip(std::vector<double>(100, 0.1), "s", "u"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooShort);
  }
}

TEST(Features, FrameRateMatchesDefaultEncoder) {
  FeatureConfig f;
  model::ModelConfig m;
  EXPECT_EQ(f.hop, m.total_stride());
  EXPECT_DOUBLE_EQ(f.frame_rate(), 50.0);
}

TEST(KMeans, SeparatedCloudsRecoverMeans) {
  Rng rng = MakeRng(1);
  MatD a = testing::RandomMat(500, 3, rng, 0.01), b = testing::RandomMat(500, 3, rng, 0.01);
  a.array() += 5.0;
  b.array() -= 5.0;
  MatD frames(1000, 3);
  frames << a, b;
  const Codebook cb = FitCodebook(frames, 2, 7).codebook;
  const RowVec<double> ma = a.colwise().mean(), mb = b.colwise().mean();
  const int ia = NearestCentroid(ma, cb.centroids);
  EXPECT_LT((cb.centroids.row(ia) - ma).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT((cb.centroids.row(1 - ia) - mb).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(KMeans, SingleClusterIsGlobalMean) {
  Rng rng = MakeRng(2);
  const MatD frames = testing::RandomMat(40, 5, rng);
  const Codebook cb = FitCodebook(frames, 1, 0).codebook;
  EXPECT_LT((cb.centroids.row(0) - frames.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KMeans, TooFewDistinctFrames) {
  MatD frames(6, 2);
  frames << 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1;
  try {
    FitCodebook(frames, 3, 0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientData);
  }
}

TEST(KMeans, SameSeedSameCentroids) {
  Rng rng = MakeRng(3);
  const MatD frames = testing::RandomMat(300, 4, rng);
  EXPECT_EQ(FitCodebook(frames, 5, 11).codebook.centroids,
            FitCodebook(frames, 5, 11).codebook.centroids);
}

TEST(Assign, ExactCentroidAndTieBreak) {
  Codebook cb;
  cb.centroids = MatD(5, 2);
  cb.centroids << 0.0, 50.0,  //
      -1.0, 0.0,              //
      20.0, 0.0,              //
      30.0, 0.0,              //
      1.0, 0.0;
  MatD frames(2, 2);
  frames << 20.0, 0.0,  // on centroid 2
      0.0, 0.0;         // equidistant from 1 and 4
  const PseudoLabelSeq seq = AssignFrames(frames, cb);
  EXPECT_EQ(seq.labels[0], 2);
  EXPECT_EQ(seq.labels[1], 1);
}

TEST(Assign, MatchesBruteForce) {
  Rng rng = MakeRng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 1 + trial % 4, T = 1 + (trial * 7) % 50;
    Codebook cb;
    cb.centroids = testing::RandomMat(K, 3, rng);
    const MatD frames = testing::RandomMat(T, 3, rng);
    const PseudoLabelSeq got = AssignFrames(frames, cb);
    for (int t = 0; t < T; ++t) {
      int best = 0;
      double best_d = (frames.row(t) - cb.centroids.row(0)).squaredNorm();
      for (int k = 1; k < K; ++k) {
        const double d = (frames.row(t) - cb.centroids.row(k)).squaredNorm();
        if (d < best_d) best = k, best_d = d;
      }
      ASSERT_EQ(got.labels[std::size_t(t)], best);
    }
  }
}

TEST(Assign, TwoToneClipSwitchesAtBoundary) {
  FeatureConfig fcfg;
  const auto low = Sine(8000, 500.0), high = Sine(8000, 3000.0);
  MatD fa = FrameSpectralFeatures(Clip(low, "s", "a"), fcfg);
  MatD fb = FrameSpectralFeatures(Clip(high, "s", "b"), fcfg);
  MatD frames(fa.rows() + fb.rows(), fa.cols());
  frames << fa, fb;
  const Codebook cb = FitCodebook(frames, 2, 0, fcfg).codebook;
  std::vector<double> both = low;
  both.insert(both.end(), high.begin(), high.end());
  const PseudoLabelSeq seq = AssignLabels(Clip(both, "s", "c"), cb, fcfg);
  // The tone change at sample 8000 falls in frame 8000 / 320 = 25.
  const int boundary = 25;
  const int first = seq.labels[0];
  for (int t = 0; t < boundary - 2; ++t) EXPECT_EQ(seq.labels[std::size_t(t)], first) << t;
  for (int t = boundary + 2; t < int(seq.size()); ++t)
    EXPECT_NE(seq.labels[std::size_t(t)], first) << t;
}

TEST(Assign, AlignmentRule) {
  PseudoLabelSeq s{{1, 2, 3}};
  EXPECT_EQ(AlignLabels(s, 5).labels, (std::vector<int>{1, 2, 3, 3, 3}));
  EXPECT_EQ(AlignLabels(s, 1).labels, (std::vector<int>{1}));
  try {
    AlignLabels(s, 6);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAlignment);
  }
}

TEST(Assign, AlignedToEncoderFramesAcrossLengths) {
  Rng rng = MakeRng(5);
  Codebook cb;
  cb.centroids = testing::RandomMat(4, 39, rng);
  model::ModelConfig m;
  for (double sec = 0.5; sec <= 10.0; sec += 0.25) {
    const auto n = std::size_t(sec * kSampleRate);
    const PseudoLabelSeq seq =
        AssignLabels(Clip(Sine(n, 300.0 + sec), "s", "u"), cb, cb.feature_cfg, m.FrameCount(n));
    ASSERT_EQ(int(seq.size()), m.FrameCount(n)) << sec;
    for (int u : seq.labels) ASSERT_TRUE(u >= 0 && u < cb.K());
  }
}

TEST(Silence, Definition) {
  Codebook cb;
  cb.centroids = MatD::Zero(32, 39);
  EXPECT_EQ(SilenceLabels(5, cb).labels, std::vector<int>(5, 32));
  EXPECT_EQ(SilenceLabels(1, cb).labels, std::vector<int>{32});
  for (int t = 1; t <= 100; ++t) ASSERT_EQ(int(SilenceLabels(t, cb).size()), t);
  EXPECT_EQ(cb.vocabulary(), 33);
}

TEST(Persist, CodebookFileLayout) {
  testing::TempDir dir("cb");
  Rng rng = MakeRng(6);
  Codebook cb;
  cb.centroids = testing::RandomMat(3, 39, rng);
  SaveCodebook(dir.path() / "cb.bin", cb);
  std::ifstream in(dir.path() / "cb.bin", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ASSERT_GE(bytes.size(), 16u + 3 * 39 * 8);
  EXPECT_EQ(bytes.substr(0, 8), "SAWL-KM1");
  std::int32_t k, f;
  std::memcpy(&k, bytes.data() + 8, 4);
  std::memcpy(&f, bytes.data() + 12, 4);
  EXPECT_EQ(k, 3);
  EXPECT_EQ(f, 39);
  double first;
  std::memcpy(&first, bytes.data() + 16, 8);
  EXPECT_EQ(first, cb.centroids(0, 0));
  const auto trailer = nlohmann::json::parse(bytes.substr(16 + 3 * 39 * 8));
  EXPECT_EQ(trailer.at("feature_cfg").at("hop"), 320);

  const Codebook back = LoadCodebook(dir.path() / "cb.bin");
  EXPECT_EQ(back.centroids, cb.centroids);
  EXPECT_TRUE(back.feature_cfg == cb.feature_cfg);
  EXPECT_EQ(CodebookHash(back), CodebookHash(cb));
}

TEST(Persist, LabelsAreNewlineDelimited) {
  testing::TempDir dir("labels");
  const PseudoLabelSeq s{{4, 0, 32, 7}};
  SaveLabels(dir.path() / "u1.txt", s);
  std::ifstream in(dir.path() / "u1.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "4\n0\n32\n7\n");
  EXPECT_EQ(LoadLabels(dir.path() / "u1.txt"), s);
}

}  // namespace
}  // namespace samix::labeler
