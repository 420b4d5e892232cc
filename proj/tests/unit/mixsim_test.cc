// samix/tests/unit/mixsim_test.cc

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

#include <fstream>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "samix/common/error.h"
#include "samix/mixsim/manifest.h"
#include "samix/mixsim/mixture.h"
#include "samix/mixsim/scenario.h"
#include "samix/mixsim/synthetic.h"
#include "test_util.h"

namespace samix::mixsim {
namespace {

using testing::Clip;
using testing::MemoryCorpus;
using testing::Sine;

double RmsOver(const std::vector<double> &x, std::size_t lo, std::size_t hi) {
  double acc = 0.0;
  for (std::size_t n = lo; n < hi; ++n) acc += x[n] * x[n];
  return std::sqrt(acc / double(hi - lo));
}

Corpus TwoSpeakerCorpus(double seconds = 1.0) {
  const auto n = std::size_t(seconds * kSampleRate);
  std::vector<AudioClip> noise = {Clip(testing::Sine(8000, 3100.0, 0.2), "", "n1")};
  return MemoryCorpus({Clip(Sine(n, 200.0), "A", "a1"), Clip(Sine(n, 230.0), "A", "a2"),
                       Clip(Sine(n, 700.0), "B", "b1"), Clip(Sine(n, 760.0), "B", "b2")},
                      noise);
}

void WriteLines(const std::filesystem::path &p, const std::vector<std::string> &lines) {
  std::ofstream os(p);
  for (const auto &l : lines) os << l << "\n";
}

TEST(Manifest, FourLinesTwoSpeakers) {
  testing::TempDir dir("manifest");
  WriteLines(dir.path() / "m.tsv", {"# header", "u1\tA\ta1.wav\t1.0", "u2\tA\ta2.wav\t1.5",
                                    "", "u3\tB\tb1.wav\t2.0", "u4\tB\tb2.wav\t0.5"});
  const CorpusManifest m = LoadManifest(dir.path() / "m.tsv");
  EXPECT_EQ(m.entries.size(), 4u);
  EXPECT_EQ(m.Speakers(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.entries[0].path, dir.path() / "a1.wav");
}

TEST(Manifest, SingleUtteranceSpeakerIsNamed) {
  testing::TempDir dir("manifest1");
  WriteLines(dir.path() / "m.tsv", {"u1\tA\ta.wav\t1", "u2\tB\tb.wav\t1", "u3\tB\tc.wav\t1"});
  try {
    LoadManifest(dir.path() / "m.tsv");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos) << e.what();
  }
}

TEST(Manifest, DuplicateUtteranceIsNamed) {
  testing::TempDir dir("manifest2");
  WriteLines(dir.path() / "m.tsv", {"u1\tA\ta.wav\t1", "u1\tA\tb.wav\t1"});
  try {
    LoadManifest(dir.path() / "m.tsv");
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("u1"), std::string::npos) << e.what();
  }
}

TEST(Scenario, DegenerateDistribution) {
  SimulationConfig cfg;
  cfg.priors = {1.0, 0.0, 0.0, 0.0};
  Rng rng = MakeRng(0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(SampleScenario(rng, cfg).kind, ScenarioKind::kClean);
}

TEST(Scenario, DefaultPriorsAreQuarterEach) {
  SimulationConfig cfg;
  Rng rng = MakeRng(0);
  std::map<ScenarioKind, int> counts;
  for (int i = 0; i < 10000; ++i) ++counts[SampleScenario(rng, cfg).kind];
  for (int k = 0; k < kScenarioKindCount; ++k)
    EXPECT_NEAR(counts[ScenarioKind(k)] / 10000.0, 0.25, 0.02);
}

TEST(Scenario, SirRangeMonteCarlo) {
  SimulationConfig cfg;
  cfg.priors = {0.0, 0.0, 1.0, 0.0};
  Rng rng = MakeRng(0);
  double lo = 1e9, hi = -1e9, sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double s = SampleScenario(rng, cfg).sir_db;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += s;
  }
  EXPECT_GE(lo, -5.0);
  EXPECT_LE(hi, 5.0);
  EXPECT_NEAR(sum / 10000.0, 0.0, 0.2);
}

TEST(Scenario, RejectsBadPriors) {
  SimulationConfig cfg;
  cfg.priors = {0.5, 0.5, 0.5, 0.0};
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(Gain, EqualRmsCases) {
  const auto a = Sine(16000, 100.0, 0.1 * std::sqrt(2.0));
  EXPECT_NEAR(GainForRatio(a, a, 20.0), 0.1, 1e-12);
  EXPECT_NEAR(GainForRatio(a, a, 0.0), 1.0, 1e-12);
}

TEST(Gain, UnequalRms) {
  const auto ref = Sine(16000, 100.0, 0.2 * std::sqrt(2.0));
  const auto oth = Sine(16000, 300.0, 0.05 * std::sqrt(2.0));
  EXPECT_NEAR(GainForRatio(ref, oth, 6.0), 4.0 * std::pow(10.0, -6.0 / 20.0), 1e-9);
  EXPECT_NEAR(GainForRatio(ref, oth, 6.0), 2.0047, 1e-4);
}

TEST(Render, CleanIsTheSource) {
  Corpus corpus = TwoSpeakerCorpus();
  Rng rng = MakeRng(3);
  const MixtureSample s = RenderMixture({ScenarioKind::kClean}, corpus, rng);
  ASSERT_EQ(s.sources.size(), 1u);
  EXPECT_FALSE(s.noise);
  EXPECT_EQ(s.mixture.samples, s.sources[0].clip.samples);
}

TEST(Render, FullOverlapAtZeroDb) {
  Corpus corpus = TwoSpeakerCorpus();
  Rng rng = MakeRng(4);
  ScenarioSpec spec{ScenarioKind::kOverlap, 1.0, 0.0, 0.0};
  const MixtureSample s = RenderPair(spec, Clip(Sine(16000, 200.0), "A", "a"),
                                     Clip(Sine(16000, 700.0, 0.1), "B", "b"), nullptr, rng);
  EXPECT_EQ(s.sources[0].offset, 0u);
  EXPECT_EQ(s.sources[1].offset, 0u);
  EXPECT_EQ(s.mixture.size(), 16000u);
  const auto a = s.PlacedTrack(0), b = s.PlacedTrack(1);
  EXPECT_NEAR(20.0 * std::log10(RmsOver(a, 0, 16000) / RmsOver(b, 0, 16000)), 0.0, 0.1);
}

TEST(Render, NoiseIsTheResidual) {
  Corpus corpus = TwoSpeakerCorpus();
  Rng rng = MakeRng(5);
  const MixtureSample s = RenderMixture({ScenarioKind::kNoisyOverlap, 0.5, 2.0, 10.0}, corpus, rng);
  ASSERT_TRUE(s.noise);
  const auto a = s.PlacedTrack(0), b = s.PlacedTrack(1);
  double err = 0.0, speech = 0.0, noise = 0.0;
  for (std::size_t n = 0; n < s.mixture.size(); ++n) {
    const double residual = s.mixture.samples[n] - a[n] - b[n];
    err = std::max(err, std::abs(residual - s.noise->gain * s.noise->clip.samples[n]));
    speech += (a[n] + b[n]) * (a[n] + b[n]);
    noise += residual * residual;
  }
  EXPECT_LE(err, 1e-7);
  EXPECT_NEAR(10.0 * std::log10(speech / noise), 10.0, 0.1);
}

TEST(Render, OverlapLongerThanClipIsRejected) {
  Rng rng = MakeRng(6);
  ScenarioSpec spec{ScenarioKind::kOverlap, 1.0, 0.0, 0.0};
  try {
    RenderPair(spec, Clip(Sine(16000, 200.0), "A", "a"), Clip(Sine(4000, 700.0), "B", "b"),
               nullptr, rng);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPlacement);
  }
}

TEST(Render, SeededRenderIsBitIdentical) {
  Corpus corpus = TwoSpeakerCorpus();
  SimulationConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1 = MakeRng(seed), r2 = MakeRng(seed);
    const auto s1 = RenderMixture(SampleScenario(r1, cfg), corpus, r1, cfg);
    const auto s2 = RenderMixture(SampleScenario(r2, cfg), corpus, r2, cfg);
    ASSERT_EQ(s1.mixture.samples, s2.mixture.samples);
  }
}

TEST(Render, ClippingRescaleKeepsSum) {
  const std::size_t n = 16000;
  Corpus corpus = MemoryCorpus({Clip(Sine(n, 200.0, 0.95), "A", "a1"),
                                Clip(Sine(n, 200.0, 0.95), "A", "a2"),
                                Clip(Sine(n, 200.0, 0.95), "B", "b1"),
                                Clip(Sine(n, 200.0, 0.95), "B", "b2")});
  Rng rng = MakeRng(8);
  const auto s = RenderMixture({ScenarioKind::kOverlap, 1.0, 0.0, 0.0}, corpus, rng);
  double peak = 0.0;
  for (double v : s.mixture.samples) peak = std::max(peak, std::abs(v));
  EXPECT_LE(peak, 0.99 + 1e-12);
  EXPECT_LE(s.ReconstructionError(), 1e-7);
}

TEST(Constrained, OverlapBelowHalfOfTenSecondPrimary) {
  Corpus corpus = TwoSpeakerCorpus(10.0);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng = MakeRng(seed, {77});
    const auto s = RenderConstrainedMixture(corpus, rng);
    ASSERT_TRUE(s.primary_index);
    const std::size_t p = *s.primary_index;
    ASSERT_LT(s.OverlapSamples(), std::size_t(5 * kSampleRate)) << "seed " << seed;
    // Equal-length inputs force truncation of the interferer.
    ASSERT_LT(s.sources[1 - p].clip.size(), s.sources[p].clip.size());
    ASSERT_NE(s.sources[0].clip.speaker_id, s.sources[1].clip.speaker_id);
  }
}

TEST(Constrained, UnconstrainedReachesHalfOverlap) {
  Corpus corpus = TwoSpeakerCorpus(1.0);
  SimulationConfig cfg;
  cfg.priors = {0.0, 0.0, 1.0, 0.0};
  int big = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng = MakeRng(seed, {78});
    const auto s = RenderMixture(SampleScenario(rng, cfg), corpus, rng, cfg);
    if (2 * s.OverlapSamples() >= s.sources[0].clip.size()) ++big;
  }
  EXPECT_GT(big, 0);
}

TEST(Enrollment, ForcedChoice) {
  Corpus corpus = TwoSpeakerCorpus();
  Rng rng = MakeRng(1);
  EXPECT_EQ(SelectEnrollment(corpus, "A", "a1", rng).utterance_id, "a2");
}

TEST(Enrollment, ExcludedNeverReturned) {
  std::vector<AudioClip> clips;
  for (int i = 1; i <= 5; ++i)
    clips.push_back(Clip(Sine(800, 100.0 * i), "S", "u" + std::to_string(i)));
  clips.push_back(Clip(Sine(800, 900.0), "T", "t1"));
  clips.push_back(Clip(Sine(800, 950.0), "T", "t2"));
  Corpus corpus = MemoryCorpus(clips);
  Rng rng = MakeRng(2);
  std::map<std::string, int> seen;
  for (int i = 0; i < 1000; ++i) ++seen[SelectEnrollment(corpus, "S", "u3", rng).utterance_id];
  EXPECT_EQ(seen.count("u3"), 0u);
  for (const char *u : {"u1", "u2", "u4", "u5"}) EXPECT_GE(seen[u], 1) << u;
}

TEST(Enrollment, NoCandidate) {
  Corpus corpus = MemoryCorpus({Clip(Sine(800, 100.0), "S", "u1")});
  Rng rng = MakeRng(3);
  try {
    SelectEnrollment(corpus, "S", "u1", rng);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEnrollment);
  }
}

TEST(Synthetic, CorpusShapeAndDeterminism) {
  SyntheticCorpusConfig cfg;
  Corpus a = MakeSyntheticCorpus(cfg), b = MakeSyntheticCorpus(cfg);
  EXPECT_EQ(a.manifest.Speakers().size(), std::size_t(cfg.speakers));
  EXPECT_EQ(a.manifest.entries.size(), std::size_t(cfg.speakers * cfg.utterances_per_speaker));
  for (std::size_t i = 0; i < a.manifest.entries.size(); ++i) {
    const auto &ca = a.audio->Get(a.manifest.entries[i]);
    EXPECT_EQ(ca.samples, b.audio->Get(b.manifest.entries[i]).samples);
    EXPECT_GE(ca.seconds(), cfg.min_seconds - 1e-9);
    EXPECT_LE(ca.seconds(), cfg.max_seconds + 1e-9);
  }
}

TEST(Synthetic, WrittenCorpusReloads) {
  testing::TempDir dir("corpus");
  SyntheticCorpusConfig cfg;
  cfg.speakers = 2;
  cfg.utterances_per_speaker = 2;
  Corpus corpus = MakeSyntheticCorpus(cfg);
  WriteCorpus(corpus, dir.path());
  const CorpusManifest m = LoadManifest(dir.path() / "speech.tsv", dir.path() / "noise.tsv");
  ASSERT_EQ(m.entries.size(), 4u);
  WavAudioSource wav;
  const AudioClip &back = wav.Get(m.entries[0]);
  const AudioClip &orig = corpus.audio->Get(corpus.manifest.entries[0]);
  ASSERT_EQ(back.size(), orig.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    ASSERT_EQ(back.samples[i], double(float(orig.samples[i])));
}

}  // namespace
}  // namespace samix::mixsim
