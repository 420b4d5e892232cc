// samix/mixsim/manifest.h

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

#ifndef SAMIX_MIXSIM_MANIFEST_H_
#define SAMIX_MIXSIM_MANIFEST_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "samix/common/audio.h"

namespace samix::mixsim {

struct ManifestEntry {
  std::string utterance_id;
  std::string speaker_id;
  std::filesystem::path path;
  double duration_seconds = 0.0;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::vector<ManifestEntry> noise_entries;

  // Speaker ids in sorted order.
  std::vector<std::string> Speakers() const;
  std::vector<const ManifestEntry *> EntriesFor(const std::string &speaker_id) const;
};

// Parses one tab-separated manifest file (utterance_id, speaker_id, path,
// duration_seconds); '#' lines and blank lines are skipped. Relative paths are
// resolved against the manifest's directory.
std::vector<ManifestEntry> ParseManifestFile(const std::filesystem::path &path);

// Checks utterance_id uniqueness and, when require_enrollment is set, that
// every speaker has at least two utterances.
void ValidateManifest(const CorpusManifest &manifest, bool require_enrollment = true);

CorpusManifest LoadManifest(const std::filesystem::path &path,
                            bool require_enrollment = true);
CorpusManifest LoadManifest(const std::filesystem::path &path,
                            const std::filesystem::path &noise_path,
                            bool require_enrollment = true);

void WriteManifest(const std::filesystem::path &path,
                   const std::vector<ManifestEntry> &entries);

// Resolves manifest entries to audio. Implementations must be safe to call
// from several threads.
class AudioSource {
 public:
  virtual ~AudioSource() = default;
  virtual const AudioClip &Get(const ManifestEntry &entry) = 0;
};

class WavAudioSource : public AudioSource {
 public:
  const AudioClip &Get(const ManifestEntry &entry) override;

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<AudioClip>> cache_;
};

class MemoryAudioSource : public AudioSource {
 public:
  void Add(AudioClip clip);
  const AudioClip &Get(const ManifestEntry &entry) override;

 private:
  std::map<std::string, AudioClip> clips_;
};

struct Corpus {
  CorpusManifest manifest;
  std::shared_ptr<AudioSource> audio;
};

}  // namespace samix::mixsim

#endif  // SAMIX_MIXSIM_MANIFEST_H_
