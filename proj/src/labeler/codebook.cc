// samix/labeler/codebook.cc

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

#include "samix/labeler/codebook.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>

#include "samix/common/digest.h"
#include "samix/common/error.h"
#include "samix/common/rng.h"

namespace samix::labeler {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'W', 'L', '-', 'K', 'M', '1'};

std::size_t CountDistinctRows(const MatD &x) {
  std::set<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    rows.emplace(x.row(i).data(), x.row(i).data() + x.cols());
  return rows.size();
}

void PutLe32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t GetLe32(const char *p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

}  // namespace

int NearestCentroid(const Eigen::Ref<const RowVec<double>> &frame, const MatD &centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
    double d = (centroids.row(k) - frame).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = int(k);
    }
  }
  return best;
}

KMeansResult FitCodebook(const MatD &frames, int K, std::uint64_t seed,
                         const FeatureConfig &feature_cfg, int max_iterations) {
  if (K < 1) Fail(ErrorKind::kConfig, "K must be positive");
  const auto n = frames.rows();
  if (std::size_t distinct = CountDistinctRows(frames); distinct < std::size_t(K))
    Fail(ErrorKind::kInsufficientData, "need at least " + std::to_string(K) +
                                           " distinct frames, got " + std::to_string(distinct));
  Rng rng = MakeRng(seed, {0xc0de});

  // k-means++ seeding.
  MatD centroids(K, frames.cols());
  centroids.row(0) = frames.row(Eigen::Index(UniformIndex(rng, std::size_t(n))));
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (frames.row(i) - centroids.row(0)).squaredNorm();
  for (int k = 1; k < K; ++k) {
    double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double u = Uniform(rng, 0.0, total);
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;
    }
    centroids.row(k) = frames.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (frames.row(i) - centroids.row(k)).squaredNorm());
  }

  std::vector<int> assign(n, -1);
  KMeansResult result;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int a = NearestCentroid(frames.row(i), centroids);
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }
    result.iterations = iter;
    if (!changed) {
      result.converged = true;
      break;
    }
    std::vector<int> counts(K, 0);
    for (int a : assign) ++counts[a];
    // Empty-cluster repair: split the largest cluster.
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) continue;
      int largest = int(std::max_element(counts.begin(), counts.end()) - counts.begin());
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        double d = (frames.row(i) - centroids.row(largest)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      assign[far] = k;
      --counts[largest];
      counts[k] = 1;
    }
    centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centroids.row(assign[i]) += frames.row(i);
    for (int k = 0; k < K; ++k) centroids.row(k) /= counts[k];
  }
  result.codebook.centroids = std::move(centroids);
  result.codebook.feature_cfg = feature_cfg;
  return result;
}

PseudoLabelSeq AssignFrames(const MatD &features, const Codebook &codebook) {
  if (features.cols() != codebook.dim())
    Fail(ErrorKind::kConfig, "feature dimension " + std::to_string(features.cols()) +
                                 " does not match codebook dimension " +
                                 std::to_string(codebook.dim()));
  PseudoLabelSeq seq;
  seq.labels.resize(features.rows());
  for (Eigen::Index t = 0; t < features.rows(); ++t)
    seq.labels[t] = NearestCentroid(features.row(t), codebook.centroids);
  return seq;
}

PseudoLabelSeq AlignLabels(PseudoLabelSeq seq, int target_frames) {
  const int have = int(seq.size());
  if (std::abs(have - target_frames) > 2 || have == 0)
    Fail(ErrorKind::kAlignment, "label count " + std::to_string(have) +
                                    " cannot be aligned to " + std::to_string(target_frames) +
                                    " frames");
  if (have > target_frames) seq.labels.resize(target_frames);
  while (int(seq.size()) < target_frames) seq.labels.push_back(seq.labels.back());
  return seq;
}

PseudoLabelSeq AssignLabels(const AudioClip &clean, const Codebook &codebook,
                            const FeatureConfig &feature_cfg, std::optional<int> target_frames) {
  if (!(feature_cfg == codebook.feature_cfg))
    Fail(ErrorKind::kConfig, "feature configuration differs from the codebook's");
  PseudoLabelSeq seq = AssignFrames(FrameSpectralFeatures(clean, feature_cfg), codebook);
  if (target_frames) seq = AlignLabels(std::move(seq), *target_frames);
  return seq;
}

PseudoLabelSeq SilenceLabels(int frames, const Codebook &codebook) {
  if (frames <= 0) Fail(ErrorKind::kShape, "silence label length must be positive");
  return PseudoLabelSeq{std::vector<int>(std::size_t(frames), codebook.silence_id())};
}

std::string SerializeCodebook(const Codebook &cb) {
  std::string out(kMagic, sizeof kMagic);
  PutLe32(out, std::uint32_t(cb.K()));
  PutLe32(out, std::uint32_t(cb.dim()));
  for (Eigen::Index k = 0; k < cb.centroids.rows(); ++k)
    for (Eigen::Index f = 0; f < cb.centroids.cols(); ++f) {
      double v = cb.centroids(k, f);
      std::uint64_t u;
      std::memcpy(&u, &v, sizeof u);
      for (int i = 0; i < 8; ++i) out.push_back(char((u >> (8 * i)) & 0xff));
    }
  out += nlohmann::json{{"feature_cfg", ToJson(cb.feature_cfg)}}.dump();
  return out;
}

void SaveCodebook(const std::filesystem::path &path, const Codebook &cb) {
  std::string bytes = SerializeCodebook(cb);
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorKind::kLoad, "cannot write " + path.string());
  os.write(bytes.data(), std::streamsize(bytes.size()));
}

Codebook LoadCodebook(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kLoad, "cannot open codebook " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    Fail(ErrorKind::kFormat, path.string() + " is not a SAWL-KM1 codebook");
  const std::uint32_t K = GetLe32(bytes.data() + 8);
  const std::uint32_t F = GetLe32(bytes.data() + 12);
  const std::size_t body = 16 + std::size_t(K) * F * 8;
  if (bytes.size() < body) Fail(ErrorKind::kFormat, path.string() + ": truncated centroids");
  Codebook cb;
  cb.centroids.resize(K, F);
  const char *p = bytes.data() + 16;
  for (std::uint32_t k = 0; k < K; ++k)
    for (std::uint32_t f = 0; f < F; ++f, p += 8) {
      std::uint64_t u = 0;
      for (int i = 0; i < 8; ++i) u |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
      std::memcpy(&cb.centroids(k, f), &u, sizeof u);
    }
  try {
    auto trailer = nlohmann::json::parse(bytes.begin() + std::ptrdiff_t(body), bytes.end());
    cb.feature_cfg = FeatureConfigFromJson(trailer.at("feature_cfg"));
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kFormat, path.string() + ": bad JSON trailer: " + e.what());
  }
  return cb;
}

std::string CodebookHash(const Codebook &codebook) {
  return Sha256Hex(SerializeCodebook(codebook));
}

void SaveLabels(const std::filesystem::path &path, const PseudoLabelSeq &seq) {
  std::ofstream os(path);
  if (!os) Fail(ErrorKind::kLoad, "cannot write " + path.string());
  for (int l : seq.labels) os << l << '\n';
}

PseudoLabelSeq LoadLabels(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kLoad, "cannot open " + path.string());
  PseudoLabelSeq seq;
  int v;
  while (in >> v) seq.labels.push_back(v);
  return seq;
}

}  // namespace samix::labeler
