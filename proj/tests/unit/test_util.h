// samix/tests/unit/test_util.h

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

#ifndef SAMIX_TESTS_UNIT_TEST_UTIL_H_
#define SAMIX_TESTS_UNIT_TEST_UTIL_H_

#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "samix/common/audio.h"
#include "samix/common/rng.h"
#include "samix/common/tensor.h"
#include "samix/mixsim/manifest.h"

namespace samix::testing {

inline MatD RandomMat(Eigen::Index rows, Eigen::Index cols, Rng &rng, double sigma = 1.0) {
  std::normal_distribution<double> dist(0.0, sigma);
  MatD m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

inline std::vector<double> Sine(std::size_t n, double hz, double amplitude = 0.5,
                                double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(2.0 * M_PI * hz * double(i) / kSampleRate + phase);
  return x;
}

inline AudioClip Clip(std::vector<double> samples, std::string speaker, std::string utt) {
  AudioClip c;
  c.samples = std::move(samples);
  c.speaker_id = std::move(speaker);
  c.utterance_id = std::move(utt);
  return c;
}

// In-memory corpus; clip order defines manifest order.
inline mixsim::Corpus MemoryCorpus(const std::vector<AudioClip> &speech,
                                   const std::vector<AudioClip> &noise = {}) {
  auto audio = std::make_shared<mixsim::MemoryAudioSource>();
  mixsim::Corpus corpus;
  for (const auto &c : speech) {
    corpus.manifest.entries.push_back({c.utterance_id, c.speaker_id, {}, c.seconds()});
    audio->Add(c);
  }
  for (const auto &c : noise) {
    corpus.manifest.noise_entries.push_back({c.utterance_id, c.speaker_id, {}, c.seconds()});
    audio->Add(c);
  }
  corpus.audio = audio;
  return corpus;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("samix-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace samix::testing

#endif  // SAMIX_TESTS_UNIT_TEST_UTIL_H_
