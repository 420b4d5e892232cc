// samix/mixsim/synthetic.cc

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

#include "samix/mixsim/synthetic.h"

#include <cmath>
#include <numbers>
#include <random>

#include "samix/common/error.h"
#include "samix/common/rng.h"

namespace samix::mixsim {

namespace {

constexpr double kBandLow = 300.0;
constexpr double kBandWidth = 900.0;

AudioClip MakeUtterance(const SyntheticCorpusConfig &cfg, int speaker, Rng &rng) {
  const double seconds = Uniform(rng, cfg.min_seconds, cfg.max_seconds);
  const auto length = static_cast<std::size_t>(seconds * kSampleRate);
  AudioClip clip;
  clip.samples.assign(length, 0.0);

  const double band_lo = kBandLow + kBandWidth * speaker;
  const double unit_width = kBandWidth / cfg.units_per_speaker;
  const double level = 0.3 * std::pow(10.0, Uniform(rng, -3.0, 3.0) / 20.0);
  const auto fade = static_cast<std::size_t>(0.01 * kSampleRate);

  int unit = static_cast<int>(UniformIndex(rng, std::size_t(cfg.units_per_speaker)));
  std::size_t pos = 0;
  while (pos < length) {
    auto seg = static_cast<std::size_t>(
        Uniform(rng, cfg.min_unit_seconds, cfg.max_unit_seconds) * kSampleRate);
    seg = std::min(seg, length - pos);
    const double f_base = band_lo + unit * unit_width;
    const double freqs[3] = {f_base + 0.15 * unit_width, f_base + 0.5 * unit_width,
                             f_base + 0.85 * unit_width};
    const double amps[3] = {1.0, 0.6 + 0.1 * unit, 0.4};
    double phase[3];
    for (double &p : phase) p = Uniform(rng, 0.0, 2.0 * std::numbers::pi);
    for (std::size_t n = 0; n < seg; ++n) {
      double env = 1.0;
      if (n < fade) env = 0.5 - 0.5 * std::cos(std::numbers::pi * n / fade);
      if (seg - n <= fade) env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * (seg - n) / fade));
      double t = double(n) / kSampleRate;
      double v = 0.0;
      for (int k = 0; k < 3; ++k)
        v += amps[k] * std::sin(2.0 * std::numbers::pi * freqs[k] * t + phase[k]);
      clip.samples[pos + n] = level * env * v / 2.0;
    }
    pos += seg;
    unit = (unit + 1) % cfg.units_per_speaker;
  }
  std::normal_distribution<double> floor_noise(0.0, 1e-3);
  for (double &s : clip.samples) s += floor_noise(rng);
  return clip;
}

AudioClip MakeNoise(const SyntheticCorpusConfig &cfg, int index, Rng &rng) {
  AudioClip clip;
  const auto length = static_cast<std::size_t>(cfg.noise_seconds * kSampleRate);
  clip.samples.resize(length);
  std::normal_distribution<double> white(0.0, 0.1);
  // Alternate white and one-pole low-passed noise.
  const double pole = (index % 2 == 0) ? 0.0 : 0.9;
  double prev = 0.0;
  for (auto &s : clip.samples) {
    prev = pole * prev + (1.0 - pole) * white(rng);
    s = prev;
  }
  return clip;
}

}  // namespace

Corpus MakeSyntheticCorpus(const SyntheticCorpusConfig &cfg) {
  if (cfg.speakers < 1 || cfg.utterances_per_speaker < 1 || cfg.units_per_speaker < 1 ||
      cfg.min_seconds <= 0.0 || cfg.max_seconds < cfg.min_seconds)
    Fail(ErrorKind::kConfig, "invalid synthetic corpus configuration");
  if (kBandLow + kBandWidth * cfg.speakers > kSampleRate / 2.0)
    Fail(ErrorKind::kConfig, "too many synthetic speakers for the 8 kHz band limit");
  auto audio = std::make_shared<MemoryAudioSource>();
  Corpus corpus;
  Rng rng = MakeRng(cfg.seed, {0x5e});
  for (int s = 0; s < cfg.speakers; ++s) {
    for (int u = 0; u < cfg.utterances_per_speaker; ++u) {
      AudioClip clip = MakeUtterance(cfg, s, rng);
      clip.speaker_id = "spk" + std::to_string(s);
      clip.utterance_id = clip.speaker_id + "-utt" + std::to_string(u);
      ManifestEntry e{clip.utterance_id, clip.speaker_id, clip.utterance_id + ".wav",
                      clip.seconds()};
      corpus.manifest.entries.push_back(e);
      audio->Add(std::move(clip));
    }
  }
  for (int i = 0; i < cfg.noise_clips; ++i) {
    AudioClip clip = MakeNoise(cfg, i, rng);
    clip.speaker_id = "noise";
    clip.utterance_id = "noise" + std::to_string(i);
    ManifestEntry e{clip.utterance_id, clip.speaker_id, clip.utterance_id + ".wav",
                    clip.seconds()};
    corpus.manifest.noise_entries.push_back(e);
    audio->Add(std::move(clip));
  }
  corpus.audio = std::move(audio);
  return corpus;
}

void WriteCorpus(Corpus &corpus, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  auto dump = [&](std::vector<ManifestEntry> entries, const char *name) {
    for (auto &e : entries) {
      WriteWav(dir / (e.utterance_id + ".wav"), corpus.audio->Get(e));
      e.path = e.utterance_id + ".wav";
    }
    WriteManifest(dir / name, entries);
  };
  dump(corpus.manifest.entries, "speech.tsv");
  dump(corpus.manifest.noise_entries, "noise.tsv");
}

}  // namespace samix::mixsim
