// samix/evalkit/probe.h

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

#ifndef SAMIX_EVALKIT_PROBE_H_
#define SAMIX_EVALKIT_PROBE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "samix/model/params.h"
#include "samix/trainer/data.h"

namespace samix::evalkit {

using trainer::RenderedItem;

// Held-out items drawn from their own seed stream (never a training pool).
// `kind` forces one scenario kind.
std::vector<RenderedItem> MakeEvalSet(const trainer::DataContext &ctx,
                                      const trainer::SpeakerEmbedder &embedder, double crop_seconds,
                                      std::uint64_t seed, int count,
                                      std::optional<mixsim::ScenarioKind> kind = std::nullopt);

struct ProbeConfig {
  int epochs = 300;
  double learning_rate = 0.02;
  std::uint64_t seed = 0;
  // Fraction of examples (by position) used to fit the probe.
  double train_fraction = 0.5;
};

struct ProbeExample {
  std::vector<MatD> layers;  // layer_count + 1 matrices, T x D
  labeler::PseudoLabelSeq labels;
};

struct ProbeResult {
  double train_accuracy = 0.0;
  double eval_accuracy = 0.0;
  std::vector<double> layer_weights;
};

// Linear classifier over a learned softmax-weighted sum of the layers,
// trained full-batch with Adam on the leading train_fraction of examples and
// scored on the rest (on all examples when there is only one).
ProbeResult TrainProbe(const std::vector<ProbeExample> &examples, int vocabulary,
                       const ProbeConfig &cfg);

struct ProbeReport {
  ProbeResult correct;     // conditioned on the target speaker
  ProbeResult interferer;  // conditioned on the other speaker
  std::optional<ProbeResult> baseline;  // unconditioned baseline encoder
  double gap() const { return correct.eval_accuracy - interferer.eval_accuracy; }
};

nlohmann::json ToJson(const ProbeReport &r);

// Extract-only downstream use: frozen representations of two-speaker eval
// items, both speakers taken in turn as the target. The parameters are only
// read.
ProbeReport ProbeTargetLabeling(const model::Params<float> &params,
                                const model::Params<float> *baseline,
                                const model::ModelConfig &cfg,
                                const std::vector<RenderedItem> &items, int vocabulary,
                                const ProbeConfig &probe_cfg);

// Mean total-variation gap between softmax(Z^1) under order (a, b) and
// softmax(Z^2) under (b, a), averaged with the mirrored comparison. One-speaker
// items pair the speaker with e^s.
double OrderSwapConsistency(const model::Params<float> &params, const model::ModelConfig &cfg,
                            const std::vector<RenderedItem> &items);

struct SlotAccuracyReport {
  std::array<double, 2> two_speaker{};  // masked accuracy per head position
  double one_speaker_real = 0.0;
  double one_speaker_absent = 0.0;  // silence-token accuracy of the e^s slot
  int two_speaker_items = 0;
  int one_speaker_items = 0;
};

nlohmann::json ToJson(const SlotAccuracyReport &r);

// Masked-prediction accuracies with masks and slot order drawn from `seed`.
// One-speaker items always use the e^s slot.
SlotAccuracyReport EvaluateSlots(const model::Params<float> &params, const model::ModelConfig &cfg,
                                 const labeler::Codebook &codebook,
                                 const std::vector<RenderedItem> &items, std::uint64_t seed);

}  // namespace samix::evalkit

#endif  // SAMIX_EVALKIT_PROBE_H_
