// samix/model/speaker.cc

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

#include "samix/model/speaker.h"

#include <cmath>
#include <random>

#include "samix/common/error.h"
#include "samix/common/rng.h"
#include "samix/model/encoder.h"

namespace samix::model {

namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

RowVec<double> GaussianUnit(int dim, Rng &rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  RowVec<double> v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = dist(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

std::string_view EmbeddingKindName(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kReal: return "real";
    case EmbeddingKind::kDistractor: return "distractor";
    case EmbeddingKind::kNonSpeaker: return "non_speaker";
  }
  return "real";
}

EmbeddingMode ParseEmbeddingMode(std::string_view name) {
  if (name == "lookup") return EmbeddingMode::kLookup;
  if (name == "enrollment_mean") return EmbeddingMode::kEnrollmentMean;
  Fail(ErrorKind::kConfig, "unknown speaker embedding mode '" + std::string(name) + "'");
}

std::string_view EmbeddingModeName(EmbeddingMode mode) {
  return mode == EmbeddingMode::kLookup ? "lookup" : "enrollment_mean";
}

SpeakerEmbedding LookupEmbedding(const std::string &speaker_id, int dim, std::uint64_t salt) {
  if (dim <= 0) Fail(ErrorKind::kShape, "embedding dimension must be positive");
  Rng rng = MakeRng(Fnv1a(speaker_id), {salt, 0x5be});
  return {GaussianUnit(dim, rng), EmbeddingKind::kReal, speaker_id};
}

template <typename T>
SpeakerEmbedding EnrollmentEmbedding(const AudioClip &enrollment, const Params<T> &params,
                                     const ModelConfig &cfg, std::uint64_t projection_seed) {
  FrameFeatures<T> frames = EncodeFrames(params, cfg, enrollment);
  RowVec<double> mean = frames.values.template cast<double>().colwise().mean();
  Rng rng = MakeRng(projection_seed, {0xe1, std::uint64_t(cfg.D), std::uint64_t(cfg.E)});
  std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(double(cfg.D)));
  MatD projection(cfg.D, cfg.E);
  for (Eigen::Index i = 0; i < projection.size(); ++i) projection.data()[i] = dist(rng);
  RowVec<double> e = mean * projection;
  const double norm = e.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    Fail(ErrorKind::kDegenerateSignal, "enrollment clip '" + enrollment.utterance_id +
                                           "' yields a zero embedding");
  SpeakerEmbedding out{e / norm, EmbeddingKind::kReal, std::nullopt};
  if (!enrollment.speaker_id.empty()) out.speaker_id = enrollment.speaker_id;
  return out;
}

SpeakerEmbedding NonSpeakerEmbedding(const RowVec<double> &e_s) {
  return {e_s, EmbeddingKind::kNonSpeaker, std::nullopt};
}

EmbeddingTable::EmbeddingTable(const std::vector<std::string> &speakers, int dim,
                               double max_cosine) {
  for (std::uint64_t salt = 0; salt < 64; ++salt) {
    table_.clear();
    for (const auto &s : speakers) table_.emplace(s, LookupEmbedding(s, dim, salt));
    bool ok = true;
    for (auto a = table_.begin(); a != table_.end() && ok; ++a)
      for (auto b = std::next(a); b != table_.end(); ++b)
        if (a->second.vector.dot(b->second.vector) >= max_cosine) {
          ok = false;
          break;
        }
    if (ok) {
      salt_ = salt;
      return;
    }
  }
  Fail(ErrorKind::kSampling, "could not separate speaker lookup embeddings");
}

const SpeakerEmbedding &EmbeddingTable::at(const std::string &speaker_id) const {
  auto it = table_.find(speaker_id);
  if (it == table_.end()) Fail(ErrorKind::kSampling, "no embedding for speaker '" + speaker_id + "'");
  return it->second;
}

std::vector<SpeakerEmbedding> EmbeddingTable::Except(const std::string &speaker_id) const {
  std::vector<SpeakerEmbedding> out;
  for (const auto &[id, e] : table_)
    if (id != speaker_id) {
      out.push_back(e);
      out.back().kind = EmbeddingKind::kDistractor;
    }
  return out;
}

template SpeakerEmbedding EnrollmentEmbedding(const AudioClip &, const Params<float> &,
                                              const ModelConfig &, std::uint64_t);
template SpeakerEmbedding EnrollmentEmbedding(const AudioClip &, const Params<double> &,
                                              const ModelConfig &, std::uint64_t);

}  // namespace samix::model
