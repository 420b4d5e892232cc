// samix/mixsim/mixture.cc

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

#include "samix/mixsim/mixture.h"

#include <algorithm>
#include <cmath>

#include "samix/common/error.h"

namespace samix::mixsim {

namespace {

constexpr int kPairAttempts = 32;

struct Placement {
  std::size_t offset_a = 0;
  std::size_t offset_b = 0;
  std::size_t length = 0;
};

// Places b relative to a (a nominally at 0) so that the two intersect in
// exactly `overlap` samples; the onset is drawn among the valid ones.
Placement PlacePair(std::size_t len_a, std::size_t len_b, std::size_t overlap, Rng &rng) {
  if (overlap > std::min(len_a, len_b))
    Fail(ErrorKind::kPlacement, "requested overlap of " + std::to_string(overlap) +
                                    " samples exceeds a clip length (" +
                                    std::to_string(len_a) + ", " + std::to_string(len_b) + ")");
  const auto la = static_cast<long long>(len_a);
  const auto lb = static_cast<long long>(len_b);
  const auto lo = static_cast<long long>(overlap);
  long long start;  // onset of b relative to a
  if (lo < std::min(la, lb)) {
    start = Bernoulli(rng, 0.5) ? lo - lb : la - lo;
  } else if (la <= lb) {
    // a lies inside b.
    start = -static_cast<long long>(UniformIndex(rng, std::size_t(lb - la + 1)));
  } else {
    start = static_cast<long long>(UniformIndex(rng, std::size_t(la - lb + 1)));
  }
  long long first = std::min(0LL, start);
  long long last = std::max(la, start + lb);
  Placement p;
  p.offset_a = std::size_t(-first);
  p.offset_b = std::size_t(start - first);
  p.length = std::size_t(last - first);
  return p;
}

const ManifestEntry &PickEntry(const std::vector<const ManifestEntry *> &pool, Rng &rng) {
  return *pool[UniformIndex(rng, pool.size())];
}

std::pair<std::string, std::string> PickSpeakerPair(const CorpusManifest &m, Rng &rng) {
  auto speakers = m.Speakers();
  if (speakers.size() < 2)
    Fail(ErrorKind::kCorpus, "two-speaker scenarios need at least 2 speakers, corpus has " +
                                 std::to_string(speakers.size()));
  std::size_t i = UniformIndex(rng, speakers.size());
  std::size_t j = UniformIndex(rng, speakers.size() - 1);
  if (j >= i) ++j;
  return {speakers[i], speakers[j]};
}

AudioClip TileNoise(const AudioClip &noise, std::size_t length, Rng &rng) {
  AudioClip out = noise;
  out.samples.resize(length);
  std::size_t start = UniformIndex(rng, noise.size());
  for (std::size_t n = 0; n < length; ++n)
    out.samples[n] = noise.samples[(start + n) % noise.size()];
  return out;
}

void Compose(MixtureSample &s) {
  std::size_t length = 0;
  for (const auto &src : s.sources) length = std::max(length, src.end());
  s.mixture.samples.assign(length, 0.0);
  for (const auto &src : s.sources)
    for (std::size_t n = 0; n < src.clip.size(); ++n)
      s.mixture.samples[src.offset + n] += src.gain * src.clip.samples[n];
  if (s.noise)
    for (std::size_t n = 0; n < length; ++n)
      s.mixture.samples[n] += s.noise->gain * s.noise->clip.samples[n];
}

void AvoidClipping(MixtureSample &s, double peak_limit) {
  double peak = 0.0;
  for (double v : s.mixture.samples) peak = std::max(peak, std::abs(v));
  if (peak <= peak_limit) return;
  const double scale = peak_limit / peak;
  for (auto &src : s.sources) src.gain *= scale;
  if (s.noise) s.noise->gain *= scale;
  Compose(s);
}

void AddNoise(MixtureSample &s, Corpus &corpus, double snr_db, Rng &rng) {
  if (corpus.manifest.noise_entries.empty())
    Fail(ErrorKind::kCorpus, "noisy scenario requested but corpus has no noise entries");
  const auto &entry =
      corpus.manifest.noise_entries[UniformIndex(rng, corpus.manifest.noise_entries.size())];
  NoiseTrack track;
  track.clip = TileNoise(corpus.audio->Get(entry), s.mixture.size(), rng);
  track.clip.utterance_id = entry.utterance_id;
  track.gain = GainForRatio(s.mixture.samples, track.clip.samples, snr_db);
  s.noise = std::move(track);
  Compose(s);
}

void FillPair(MixtureSample &s, AudioClip a, AudioClip b, std::size_t overlap,
              double sir_db, Rng &rng) {
  Placement p = PlacePair(a.size(), b.size(), overlap, rng);
  s.sources.resize(2);
  s.sources[0] = PlacedSource{std::move(a), 1.0, p.offset_a};
  s.sources[1] = PlacedSource{std::move(b), 1.0, p.offset_b};
  std::size_t lo = std::max(s.sources[0].offset, s.sources[1].offset);
  std::size_t hi = std::min(s.sources[0].end(), s.sources[1].end());
  std::span<const double> ref(s.sources[0].clip.samples);
  std::span<const double> oth(s.sources[1].clip.samples);
  if (hi > lo) {
    ref = ref.subspan(lo - s.sources[0].offset, hi - lo);
    oth = oth.subspan(lo - s.sources[1].offset, hi - lo);
  }
  s.sources[1].gain = GainForRatio(ref, oth, sir_db);
  Compose(s);
}

}  // namespace

std::vector<double> MixtureSample::PlacedTrack(std::size_t i) const {
  std::vector<double> out(mixture.size(), 0.0);
  const auto &src = sources.at(i);
  for (std::size_t n = 0; n < src.clip.size(); ++n)
    out[src.offset + n] = src.gain * src.clip.samples[n];
  return out;
}

double MixtureSample::ReconstructionError() const {
  std::vector<double> acc(mixture.size(), 0.0);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    auto t = PlacedTrack(i);
    for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += t[n];
  }
  if (noise)
    for (std::size_t n = 0; n < acc.size(); ++n)
      acc[n] += noise->gain * noise->clip.samples[n];
  double err = 0.0;
  for (std::size_t n = 0; n < acc.size(); ++n)
    err = std::max(err, std::abs(mixture.samples[n] - acc[n]));
  return err;
}

std::size_t MixtureSample::OverlapSamples() const {
  if (sources.size() < 2) return 0;
  std::size_t lo = std::max(sources[0].offset, sources[1].offset);
  std::size_t hi = std::min(sources[0].end(), sources[1].end());
  return hi > lo ? hi - lo : 0;
}

double MixtureSample::MeasuredSirDb() const {
  if (sources.size() < 2) Fail(ErrorKind::kValidation, "SIR needs two sources");
  auto a = PlacedTrack(0), b = PlacedTrack(1);
  std::span<const double> sa(a), sb(b);
  std::size_t lo = std::max(sources[0].offset, sources[1].offset);
  std::size_t hi = std::min(sources[0].end(), sources[1].end());
  if (hi > lo) {
    sa = sa.subspan(lo, hi - lo);
    sb = sb.subspan(lo, hi - lo);
    return 20.0 * std::log10(Rms(sa) / Rms(sb));
  }
  return 20.0 * std::log10(Rms(sources[0].clip.samples) * std::abs(sources[0].gain) /
                           (Rms(sources[1].clip.samples) * std::abs(sources[1].gain)));
}

double MixtureSample::MeasuredSnrDb() const {
  if (!noise) Fail(ErrorKind::kValidation, "SNR needs a noise track");
  std::vector<double> speech(mixture.size(), 0.0), n(mixture.size(), 0.0);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    auto t = PlacedTrack(i);
    for (std::size_t k = 0; k < t.size(); ++k) speech[k] += t[k];
  }
  for (std::size_t k = 0; k < n.size(); ++k) n[k] = noise->gain * noise->clip.samples[k];
  return 20.0 * std::log10(Rms(speech) / Rms(n));
}

double GainForRatio(std::span<const double> reference, std::span<const double> other,
                    double target_db) {
  const double rr = Rms(reference);
  const double ro = Rms(other);
  if (!(ro > 0.0)) Fail(ErrorKind::kDegenerateSignal, "interfering signal has zero RMS");
  if (!(rr > 0.0)) Fail(ErrorKind::kDegenerateSignal, "reference signal has zero RMS");
  return (rr / ro) * std::pow(10.0, -target_db / 20.0);
}

double GainForRatio(const AudioClip &reference, const AudioClip &other, double target_db) {
  std::size_t n = std::min(reference.size(), other.size());
  return GainForRatio(std::span<const double>(reference.samples).first(n),
                      std::span<const double>(other.samples).first(n), target_db);
}

MixtureSample RenderMixture(const ScenarioSpec &spec, Corpus &corpus, Rng &rng,
                            const SimulationConfig &cfg) {
  const auto &m = corpus.manifest;
  if (m.entries.empty()) Fail(ErrorKind::kCorpus, "corpus has no speech entries");
  MixtureSample s;
  s.scenario = spec;
  if (IsTwoSpeaker(spec.kind)) {
    // Redraw the utterance pair while the interferer is too short for the
    // requested overlap; the last draw is placed regardless and may fail.
    AudioClip a, b;
    std::size_t overlap = 0;
    for (int attempt = 0; attempt < kPairAttempts; ++attempt) {
      auto [spk_a, spk_b] = PickSpeakerPair(m, rng);
      a = corpus.audio->Get(PickEntry(m.EntriesFor(spk_a), rng));
      b = corpus.audio->Get(PickEntry(m.EntriesFor(spk_b), rng));
      overlap = static_cast<std::size_t>(std::llround(spec.overlap_ratio * a.size()));
      if (overlap <= b.size()) break;
    }
    FillPair(s, std::move(a), std::move(b), overlap, spec.sir_db, rng);
  } else {
    const auto &ea = m.entries[UniformIndex(rng, m.entries.size())];
    s.sources.push_back(PlacedSource{corpus.audio->Get(ea), 1.0, 0});
    s.scenario.overlap_ratio = 0.0;
    s.scenario.sir_db = 0.0;
    Compose(s);
  }
  if (IsNoisy(spec.kind)) AddNoise(s, corpus, spec.snr_db, rng);
  AvoidClipping(s, cfg.clip_peak);
  s.mixture.utterance_id = "mix";
  return s;
}

MixtureSample RenderPair(const ScenarioSpec &spec, AudioClip target, AudioClip interferer,
                         Corpus *noise_corpus, Rng &rng, const SimulationConfig &cfg) {
  if (!IsTwoSpeaker(spec.kind))
    Fail(ErrorKind::kPlacement, "RenderPair needs a two-speaker scenario");
  ValidateClip(target);
  ValidateClip(interferer);
  MixtureSample s;
  s.scenario = spec;
  auto overlap = static_cast<std::size_t>(std::llround(spec.overlap_ratio * target.size()));
  FillPair(s, std::move(target), std::move(interferer), overlap, spec.sir_db, rng);
  if (IsNoisy(spec.kind)) {
    if (!noise_corpus) Fail(ErrorKind::kCorpus, "noisy scenario requested without a noise corpus");
    AddNoise(s, *noise_corpus, spec.snr_db, rng);
  }
  AvoidClipping(s, cfg.clip_peak);
  s.mixture.utterance_id = "mix";
  return s;
}

MixtureSample RenderConstrainedMixture(Corpus &corpus, Rng &rng,
                                       const SimulationConfig &cfg) {
  cfg.Validate();
  const auto &m = corpus.manifest;
  double p_two = cfg.priors[int(ScenarioKind::kOverlap)] +
                 cfg.priors[int(ScenarioKind::kNoisyOverlap)];
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kOverlap;
  if (p_two > 0.0 &&
      Uniform(rng, 0.0, p_two) >= cfg.priors[int(ScenarioKind::kOverlap)])
    spec.kind = ScenarioKind::kNoisyOverlap;

  auto [spk_p, spk_i] = PickSpeakerPair(m, rng);
  AudioClip primary = corpus.audio->Get(PickEntry(m.EntriesFor(spk_p), rng));
  AudioClip interferer = corpus.audio->Get(PickEntry(m.EntriesFor(spk_i), rng));
  const std::size_t lp = primary.size();
  if (interferer.size() >= lp) {
    // Truncate so the primary stays strictly longer in the mixture.
    auto keep = static_cast<std::size_t>(std::floor(lp * Uniform(rng, 0.5, 1.0)));
    keep = std::clamp<std::size_t>(keep, 1, lp - 1);
    interferer.samples.resize(keep);
  }
  // Overlap ratio relative to the primary, strictly below one half.
  double ratio = Uniform(rng, 0.0, 0.5);
  if (ratio >= 0.5) ratio = std::nextafter(0.5, 0.0);
  auto overlap = static_cast<std::size_t>(std::floor(ratio * lp));
  overlap = std::min(overlap, interferer.size());
  while (2 * overlap >= lp && overlap > 0) --overlap;

  spec.overlap_ratio = double(overlap) / double(lp);
  spec.sir_db = Uniform(rng, cfg.sir_db.lo, cfg.sir_db.hi);
  if (IsNoisy(spec.kind)) spec.snr_db = Uniform(rng, cfg.snr_db.lo, cfg.snr_db.hi);

  MixtureSample s;
  s.scenario = spec;
  FillPair(s, std::move(primary), std::move(interferer), overlap, spec.sir_db, rng);
  if (IsNoisy(spec.kind)) AddNoise(s, corpus, spec.snr_db, rng);
  AvoidClipping(s, cfg.clip_peak);
  s.primary_index = 0;
  s.mixture.utterance_id = "mix";
  return s;
}

AudioClip SelectEnrollment(Corpus &corpus, const std::string &speaker_id,
                           const std::string &exclude_utterance_id, Rng &rng) {
  std::vector<const ManifestEntry *> pool;
  for (const auto *e : corpus.manifest.EntriesFor(speaker_id))
    if (e->utterance_id != exclude_utterance_id) pool.push_back(e);
  if (pool.empty())
    Fail(ErrorKind::kEnrollment, "no enrollment utterance for speaker '" + speaker_id +
                                     "' other than '" + exclude_utterance_id + "'");
  return corpus.audio->Get(PickEntry(pool, rng));
}

}  // namespace samix::mixsim
