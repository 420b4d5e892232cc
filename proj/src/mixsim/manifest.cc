// samix/mixsim/manifest.cc

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

#include "samix/mixsim/manifest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "samix/common/error.h"

namespace samix::mixsim {

std::vector<std::string> CorpusManifest::Speakers() const {
  std::set<std::string> ids;
  for (const auto &e : entries) ids.insert(e.speaker_id);
  return {ids.begin(), ids.end()};
}

std::vector<const ManifestEntry *> CorpusManifest::EntriesFor(
    const std::string &speaker_id) const {
  std::vector<const ManifestEntry *> out;
  for (const auto &e : entries)
    if (e.speaker_id == speaker_id) out.push_back(&e);
  return out;
}

std::vector<ManifestEntry> ParseManifestFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kLoad, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    auto where = path.string() + ":" + std::to_string(line_no);
    if (cols.size() != 4)
      Fail(ErrorKind::kParse, where + ": expected 4 tab-separated columns, got " +
                                  std::to_string(cols.size()));
    ManifestEntry e;
    e.utterance_id = cols[0];
    e.speaker_id = cols[1];
    e.path = cols[2];
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    try {
      std::size_t used = 0;
      e.duration_seconds = std::stod(cols[3], &used);
      if (used != cols[3].size()) throw std::invalid_argument(cols[3]);
    } catch (const std::exception &) {
      Fail(ErrorKind::kParse, where + ": bad duration '" + cols[3] + "'");
    }
    if (e.utterance_id.empty() || e.speaker_id.empty())
      Fail(ErrorKind::kParse, where + ": empty utterance or speaker id");
    out.push_back(std::move(e));
  }
  return out;
}

void ValidateManifest(const CorpusManifest &manifest, bool require_enrollment) {
  std::set<std::string> seen;
  for (const auto *list : {&manifest.entries, &manifest.noise_entries})
    for (const auto &e : *list)
      if (!seen.insert(e.utterance_id).second)
        Fail(ErrorKind::kValidation, "duplicate utterance_id '" + e.utterance_id + "'");
  if (!require_enrollment) return;
  std::map<std::string, int> counts;
  for (const auto &e : manifest.entries) ++counts[e.speaker_id];
  for (const auto &[speaker, n] : counts)
    if (n < 2)
      Fail(ErrorKind::kValidation,
           "speaker '" + speaker + "' has a single utterance; enrollment needs two");
}

CorpusManifest LoadManifest(const std::filesystem::path &path, bool require_enrollment) {
  CorpusManifest m;
  m.entries = ParseManifestFile(path);
  ValidateManifest(m, require_enrollment);
  return m;
}

CorpusManifest LoadManifest(const std::filesystem::path &path,
                            const std::filesystem::path &noise_path,
                            bool require_enrollment) {
  CorpusManifest m;
  m.entries = ParseManifestFile(path);
  m.noise_entries = ParseManifestFile(noise_path);
  ValidateManifest(m, require_enrollment);
  return m;
}

void WriteManifest(const std::filesystem::path &path,
                   const std::vector<ManifestEntry> &entries) {
  std::ofstream os(path);
  if (!os) Fail(ErrorKind::kLoad, "cannot write " + path.string());
  os << "# utterance_id\tspeaker_id\tpath\tduration_seconds\n";
  for (const auto &e : entries)
    os << e.utterance_id << '\t' << e.speaker_id << '\t' << e.path.string() << '\t'
       << e.duration_seconds << '\n';
}

const AudioClip &WavAudioSource::Get(const ManifestEntry &entry) {
  std::lock_guard lock(mu_);
  auto it = cache_.find(entry.utterance_id);
  if (it != cache_.end()) return *it->second;
  auto clip = std::make_unique<AudioClip>(ReadWav(entry.path));
  clip->utterance_id = entry.utterance_id;
  clip->speaker_id = entry.speaker_id;
  ValidateClip(*clip);
  return *cache_.emplace(entry.utterance_id, std::move(clip)).first->second;
}

void MemoryAudioSource::Add(AudioClip clip) {
  std::string id = clip.utterance_id;
  clips_.insert_or_assign(std::move(id), std::move(clip));
}

const AudioClip &MemoryAudioSource::Get(const ManifestEntry &entry) {
  auto it = clips_.find(entry.utterance_id);
  if (it == clips_.end())
    Fail(ErrorKind::kLoad, "no audio for utterance '" + entry.utterance_id + "'");
  return it->second;
}

}  // namespace samix::mixsim
