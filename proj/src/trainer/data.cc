// samix/trainer/data.cc

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

#include "samix/trainer/data.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "samix/common/error.h"

namespace samix::trainer {

using labeler::PseudoLabelSeq;
using model::SpeakerEmbedding;

namespace {

enum : std::uint64_t { kStreamItem = 1, kStreamPool = 2, kStreamStep = 3, kStreamFrozen = 4 };

}  // namespace

SpeakerEmbedder::SpeakerEmbedder(const DataContext &ctx, model::EmbeddingMode mode,
                                 std::uint64_t seed)
    : ctx_(ctx), mode_(mode), seed_(seed) {
  if (!ctx.corpus) Fail(ErrorKind::kCorpus, "data context has no corpus");
  if (mode == model::EmbeddingMode::kLookup)
    table_ = model::EmbeddingTable(ctx.corpus->manifest.Speakers(), ctx.model.E);
  else
    frozen_ = std::make_shared<model::Params<double>>(
        model::InitParams<double>(ctx.model, DeriveSeed(seed, {kStreamFrozen})));
}

SpeakerEmbedding SpeakerEmbedder::Embed(const std::string &speaker_id,
                                        const std::string &exclude_utterance_id, Rng &rng) const {
  if (mode_ == model::EmbeddingMode::kLookup) return table_.at(speaker_id);
  AudioClip enrollment =
      mixsim::SelectEnrollment(*ctx_.corpus, speaker_id, exclude_utterance_id, rng);
  return model::EnrollmentEmbedding(enrollment, *frozen_, ctx_.model, seed_);
}

std::vector<SpeakerEmbedding> SpeakerEmbedder::Distractors(const std::string &speaker_id,
                                                           Rng &rng) const {
  if (mode_ == model::EmbeddingMode::kLookup) return table_.Except(speaker_id);
  std::vector<SpeakerEmbedding> out;
  for (const auto &s : ctx_.corpus->manifest.Speakers()) {
    if (s == speaker_id) continue;
    out.push_back(Embed(s, "", rng));
    out.back().kind = model::EmbeddingKind::kDistractor;
  }
  return out;
}

std::string RenderedItem::Describe() const {
  std::ostringstream os;
  os << "seed=" << seed << " scenario=" << mixsim::ScenarioKindName(scenario.kind) << " utts=[";
  for (std::size_t i = 0; i < utterances.size(); ++i) os << (i ? "," : "") << utterances[i];
  os << "]";
  return os.str();
}

std::size_t ChooseCrop(const mixsim::MixtureSample &sample, std::size_t crop, Rng &rng) {
  const std::size_t len = sample.mixture.size();
  if (len <= crop) return 0;
  long lo = 0, hi = long(len - crop);
  const long c = long(crop);
  for (const auto &s : sample.sources) {
    const long need = std::min<long>(c / 4, long(s.clip.size()) / 2);
    lo = std::max(lo, long(s.offset) + need - c);
    hi = std::min(hi, long(s.end()) - need);
  }
  if (lo <= hi) return std::size_t(lo + long(UniformIndex(rng, std::size_t(hi - lo + 1))));
  return std::size_t(std::clamp((lo + hi) / 2, 0L, long(len - crop)));
}

PseudoLabelSeq SourceLabels(const mixsim::MixtureSample &sample, std::size_t i,
                            std::size_t start, std::size_t crop, const DataContext &ctx) {
  const auto &src = sample.sources.at(i);
  const int frames = ctx.model.FrameCount(crop);
  if (frames <= 0) Fail(ErrorKind::kTooShort, "crop shorter than the encoder receptive field");
  AudioClip track;
  track.samples.assign(crop, 0.0);
  track.speaker_id = src.clip.speaker_id;
  track.utterance_id = src.clip.utterance_id;
  const std::size_t a = std::max(src.offset, start);
  const std::size_t b = std::min(src.end(), start + crop);
  for (std::size_t n = a; n < b; ++n) track.samples[n - start] = src.clip.samples[n - src.offset];
  return labeler::AssignLabels(track, ctx.codebook, ctx.codebook.feature_cfg, frames);
}

RenderedItem RenderItem(const DataContext &ctx, const SpeakerEmbedder &embedder,
                        Objective objective, std::size_t crop, std::uint64_t seed,
                        std::optional<mixsim::ScenarioKind> kind) {
  Rng rng(seed);
  mixsim::MixtureSample sample;
  if (objective == Objective::kBaselineWavlm) {
    sample = mixsim::RenderConstrainedMixture(*ctx.corpus, rng, ctx.simulation);
  } else {
    mixsim::SimulationConfig sim = ctx.simulation;
    if (kind) {
      sim.priors.fill(0.0);
      sim.priors[std::size_t(*kind)] = 1.0;
    }
    sample = mixsim::RenderMixture(mixsim::SampleScenario(rng, sim), *ctx.corpus, rng, sim);
  }

  RenderedItem item;
  item.seed = seed;
  item.scenario = sample.scenario;
  item.primary_index = sample.primary_index;
  const std::size_t start = ChooseCrop(sample, crop, rng);
  item.samples.assign(crop, 0.0);
  for (std::size_t n = start; n < std::min(sample.mixture.size(), start + crop); ++n)
    item.samples[n - start] = sample.mixture.samples[n];
  for (std::size_t i = 0; i < sample.sources.size(); ++i) {
    const auto &clip = sample.sources[i].clip;
    item.speakers.push_back(clip.speaker_id);
    item.utterances.push_back(clip.utterance_id);
    item.labels.push_back(SourceLabels(sample, i, start, crop, ctx));
    item.embeddings.push_back(embedder.Embed(clip.speaker_id, clip.utterance_id, rng));
  }
  if (!mixsim::IsTwoSpeaker(sample.scenario.kind))
    item.distractors = embedder.Distractors(item.speakers.front(), rng);
  return item;
}

labeler::Codebook FitCorpusCodebook(mixsim::Corpus &corpus, int K, std::uint64_t seed,
                                    const labeler::FeatureConfig &feature_cfg) {
  std::vector<MatD> parts;
  Eigen::Index rows = 0;
  for (const auto &e : corpus.manifest.entries) {
    parts.push_back(labeler::FrameSpectralFeatures(corpus.audio->Get(e), feature_cfg));
    rows += parts.back().rows();
  }
  MatD frames(rows, feature_cfg.dim());
  Eigen::Index r = 0;
  for (const auto &m : parts) {
    frames.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return labeler::FitCodebook(frames, K, seed, feature_cfg).codebook;
}

model::MaskSpec DrawNonEmptyMask(int frames, const model::ModelConfig &cfg, Rng &rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    model::MaskSpec m = model::SampleMask(frames, cfg.mask_start_prob, cfg.mask_span, rng);
    if (!m.empty()) return m;
  }
  const int start = int(UniformIndex(rng, std::size_t(frames)));
  std::vector<int> idx;
  for (int t = start; t < std::min(frames, start + cfg.mask_span); ++t) idx.push_back(t);
  return model::MaskSpec::FromIndices(frames, std::move(idx));
}

model::ShuffleOutcome BuildSlots(const RenderedItem &item, const TrainConfig &cfg,
                                 const labeler::Codebook &codebook, Rng &rng) {
  std::vector<model::SpeakerSlot> real;
  for (std::size_t i = 0; i < item.labels.size(); ++i)
    real.push_back({item.embeddings[i], item.labels[i]});
  const RowVec<double> placeholder =
      RowVec<double>::Zero(item.embeddings.empty() ? 0 : item.embeddings[0].vector.size());
  return model::ShuffleSlots(item.scenario.kind, std::move(real), rng, cfg.alpha, placeholder,
                             codebook, item.distractors, cfg.shuffle);
}

BatchAssembler::BatchAssembler(const DataContext &ctx, const TrainConfig &cfg)
    : ctx_(ctx), cfg_(cfg), embedder_(ctx, cfg.embedding_mode, cfg.seed) {
  cfg_.Validate();
  model::CheckVocabulary(ctx.model, ctx.codebook.vocabulary());
  if (cfg_.item_pool > 0 && cfg_.objective == Objective::kSaWavlm) {
    // Stratify the pool over scenario kinds by largest remainder.
    const auto &pr = ctx.simulation.priors;
    std::array<int, mixsim::kScenarioKindCount> count{};
    std::array<double, mixsim::kScenarioKindCount> rem{};
    int assigned = 0;
    for (int k = 0; k < mixsim::kScenarioKindCount; ++k) {
      const double want = pr[std::size_t(k)] * cfg_.item_pool;
      count[std::size_t(k)] = int(want);
      rem[std::size_t(k)] = want - count[std::size_t(k)];
      assigned += count[std::size_t(k)];
    }
    while (assigned < cfg_.item_pool) {
      const auto k = std::size_t(std::max_element(rem.begin(), rem.end()) - rem.begin());
      ++count[k];
      rem[k] = -1.0;
      ++assigned;
    }
    for (int k = 0; k < mixsim::kScenarioKindCount; ++k)
      pool_kinds_.insert(pool_kinds_.end(), std::size_t(count[std::size_t(k)]), k);
  }
}

std::optional<mixsim::ScenarioKind> BatchAssembler::PoolKind(int i) const {
  if (pool_kinds_.empty()) return std::nullopt;
  return mixsim::ScenarioKind(pool_kinds_[std::size_t(i)]);
}

std::shared_ptr<const RenderedItem> BatchAssembler::PoolItem(int i) {
  if (cfg_.item_pool <= 0 || i < 0 || i >= cfg_.item_pool)
    Fail(ErrorKind::kSampling, "pool index " + std::to_string(i) + " out of range");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pool_.find(i);
    if (it != pool_.end()) return it->second;
  }
  auto item = std::make_shared<const RenderedItem>(
      RenderItem(ctx_, embedder_, cfg_.objective, cfg_.crop_samples(),
                 DeriveSeed(cfg_.seed, {kStreamPool, std::uint64_t(i)}), PoolKind(i)));
  std::lock_guard<std::mutex> lock(mu_);
  return pool_.emplace(i, std::move(item)).first->second;
}

Batch BatchAssembler::Assemble(std::int64_t step) {
  Batch batch;
  batch.step = step;
  for (int b = 0; b < cfg_.batch_size; ++b) {
    Rng rng = MakeRng(cfg_.seed, {kStreamStep, std::uint64_t(step), std::uint64_t(b)});
    BatchItem bi;
    try {
      if (cfg_.item_pool > 0) {
        bi.item = PoolItem(int(UniformIndex(rng, std::size_t(cfg_.item_pool))));
      } else {
        bi.item = std::make_shared<const RenderedItem>(RenderItem(
            ctx_, embedder_, cfg_.objective, cfg_.crop_samples(),
            DeriveSeed(cfg_.seed, {kStreamItem, std::uint64_t(step), std::uint64_t(b)})));
      }
      bi.mask = DrawNonEmptyMask(bi.item->frames(), ctx_.model, rng);
      if (cfg_.objective == Objective::kSaWavlm) {
        auto outcome = BuildSlots(*bi.item, cfg_, ctx_.codebook, rng);
        bi.slots = std::move(outcome.slots);
        bi.swapped = outcome.swapped;
      } else if (!bi.item->primary_index) {
        Fail(ErrorKind::kMode, "baseline item without a primary source");
      }
    } catch (const Error &e) {
      throw Error(e.kind(), std::string(e.what()) + " [step " + std::to_string(step) +
                                " item " + std::to_string(b) + "]");
    }
    batch.items.push_back(std::move(bi));
  }
  return batch;
}

}  // namespace samix::trainer
