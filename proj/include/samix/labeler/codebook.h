// samix/labeler/codebook.h

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

#ifndef SAMIX_LABELER_CODEBOOK_H_
#define SAMIX_LABELER_CODEBOOK_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "samix/common/audio.h"
#include "samix/common/tensor.h"
#include "samix/labeler/features.h"

namespace samix::labeler {

// K k-means centroids plus one reserved silence id (== K), so the label
// vocabulary is {0..K-1} U {K}.
struct Codebook {
  MatD centroids;  // K x F
  FeatureConfig feature_cfg;

  int K() const { return int(centroids.rows()); }
  int dim() const { return int(centroids.cols()); }
  int silence_id() const { return K(); }
  int vocabulary() const { return K() + 1; }
};

struct PseudoLabelSeq {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool operator==(const PseudoLabelSeq &) const = default;
};

struct KMeansResult {
  Codebook codebook;
  int iterations = 0;
  bool converged = false;
};

// k-means++ seeding, at most max_iterations Lloyd rounds, stopping once the
// assignment is unchanged. Empty clusters take the farthest member of the
// largest cluster.
KMeansResult FitCodebook(const MatD &frames, int K, std::uint64_t seed,
                         const FeatureConfig &feature_cfg = {}, int max_iterations = 100);

// Index of the nearest centroid; ties go to the lower index.
int NearestCentroid(const Eigen::Ref<const RowVec<double>> &frame, const MatD &centroids);
PseudoLabelSeq AssignFrames(const MatD &features, const Codebook &codebook);

// Labels for a clean clip. When target_frames is given the sequence is trimmed
// or padded by repeating its last label, provided the counts differ by <= 2.
PseudoLabelSeq AssignLabels(const AudioClip &clean, const Codebook &codebook,
                            const FeatureConfig &feature_cfg,
                            std::optional<int> target_frames = std::nullopt);

PseudoLabelSeq AlignLabels(PseudoLabelSeq seq, int target_frames);

PseudoLabelSeq SilenceLabels(int frames, const Codebook &codebook);

void SaveCodebook(const std::filesystem::path &path, const Codebook &codebook);
Codebook LoadCodebook(const std::filesystem::path &path);
// SHA-256 over the persisted byte form.
std::string CodebookHash(const Codebook &codebook);
std::string SerializeCodebook(const Codebook &codebook);

void SaveLabels(const std::filesystem::path &path, const PseudoLabelSeq &seq);
PseudoLabelSeq LoadLabels(const std::filesystem::path &path);

}  // namespace samix::labeler

#endif  // SAMIX_LABELER_CODEBOOK_H_
