// samix/trainer/data.h

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

#ifndef SAMIX_TRAINER_DATA_H_
#define SAMIX_TRAINER_DATA_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "samix/labeler/codebook.h"
#include "samix/mixsim/mixture.h"
#include "samix/model/masking.h"
#include "samix/model/params.h"
#include "samix/model/sate.h"
#include "samix/model/shuffle.h"
#include "samix/trainer/config.h"

namespace samix::trainer {

// Everything batch assembly reads. The corpus is shared, not owned.
struct DataContext {
  mixsim::Corpus *corpus = nullptr;
  labeler::Codebook codebook;
  mixsim::SimulationConfig simulation;
  model::ModelConfig model;
};

// Speaker embeddings for batch items. Lookup mode uses an EmbeddingTable over
// the corpus speakers; enrollment mode embeds a separate utterance with a
// frozen encoder initialized from `seed`.
class SpeakerEmbedder {
 public:
  SpeakerEmbedder(const DataContext &ctx, model::EmbeddingMode mode, std::uint64_t seed);

  model::SpeakerEmbedding Embed(const std::string &speaker_id,
                                const std::string &exclude_utterance_id, Rng &rng) const;
  // One embedding of every other speaker, marked as distractors.
  std::vector<model::SpeakerEmbedding> Distractors(const std::string &speaker_id, Rng &rng) const;

 private:
  const DataContext &ctx_;
  model::EmbeddingMode mode_;
  std::uint64_t seed_;
  model::EmbeddingTable table_;
  std::shared_ptr<model::Params<double>> frozen_;
};

// A rendered, cropped mixture with per-source teacher labels aligned to the
// encoder frame count.
struct RenderedItem {
  std::vector<double> samples;
  mixsim::ScenarioSpec scenario;
  std::vector<std::string> speakers;
  std::vector<std::string> utterances;
  std::vector<labeler::PseudoLabelSeq> labels;
  std::vector<model::SpeakerEmbedding> embeddings;
  std::vector<model::SpeakerEmbedding> distractors;
  std::optional<std::size_t> primary_index;
  std::uint64_t seed = 0;

  int frames() const { return labels.empty() ? 0 : int(labels.front().size()); }
  std::string Describe() const;
};

// Window of crop_samples over the mixture keeping every source audible;
// shorter mixtures are zero-padded. Returns the start offset.
std::size_t ChooseCrop(const mixsim::MixtureSample &sample, std::size_t crop_samples, Rng &rng);

// Teacher labels for source i of a cropped mixture: the unscaled clean
// source laid on the crop timeline (zeros where it is not playing) is
// labeled with the codebook. The silence id is never emitted here.
labeler::PseudoLabelSeq SourceLabels(const mixsim::MixtureSample &sample, std::size_t i,
                                     std::size_t crop_start, std::size_t crop_samples,
                                     const DataContext &ctx);

// Renders one item from its own seed. `kind` forces the scenario kind; the
// baseline objective always renders constrained mixtures.
RenderedItem RenderItem(const DataContext &ctx, const SpeakerEmbedder &embedder,
                        Objective objective, std::size_t crop_samples, std::uint64_t seed,
                        std::optional<mixsim::ScenarioKind> kind = std::nullopt);

struct BatchItem {
  std::shared_ptr<const RenderedItem> item;
  model::MaskSpec mask;
  model::SlotPair slots;  // SA objective only
  bool swapped = false;
};

struct Batch {
  std::int64_t step = 0;
  std::vector<BatchItem> items;
};

// Draws a non-empty mask: resamples up to 64 times, then masks one span at a
// uniformly drawn start.
model::MaskSpec DrawNonEmptyMask(int frames, const model::ModelConfig &cfg, Rng &rng);

// Builds the slot pair of an SA item: real slots from the item's sources, then
// the shuffling rule.
model::ShuffleOutcome BuildSlots(const RenderedItem &item, const TrainConfig &cfg,
                                 const labeler::Codebook &codebook, Rng &rng);

// k-means codebook over the spectral features of every speech clip.
labeler::Codebook FitCorpusCodebook(mixsim::Corpus &corpus, int K, std::uint64_t seed,
                                    const labeler::FeatureConfig &feature_cfg = {});

// Batches are a pure function of (config seed, step).
class BatchAssembler {
 public:
  BatchAssembler(const DataContext &ctx, const TrainConfig &cfg);

  Batch Assemble(std::int64_t step);
  const SpeakerEmbedder &embedder() const { return embedder_; }
  // Pool item i (item_pool > 0 only), rendered on first use.
  std::shared_ptr<const RenderedItem> PoolItem(int i);

 private:
  std::optional<mixsim::ScenarioKind> PoolKind(int i) const;

  const DataContext &ctx_;
  TrainConfig cfg_;
  SpeakerEmbedder embedder_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<const RenderedItem>> pool_;
  std::vector<int> pool_kinds_;
};

}  // namespace samix::trainer

#endif  // SAMIX_TRAINER_DATA_H_
