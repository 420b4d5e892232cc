// samix/common/audio.cc

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

#include "samix/common/audio.h"

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include "samix/common/error.h"

namespace samix {

namespace {

std::uint32_t ReadU32(const unsigned char *p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char *p) {
  return std::uint16_t(p[0] | (p[1] << 8));
}

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void PutU16(std::string &out, std::uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char((v >> 8) & 0xff));
}

}  // namespace

void ValidateClip(const AudioClip &clip) {
  if (clip.sample_rate != kSampleRate)
    Fail(ErrorKind::kValidation, "clip '" + clip.utterance_id + "' has sample rate " +
                                     std::to_string(clip.sample_rate));
  if (clip.samples.empty())
    Fail(ErrorKind::kValidation, "clip '" + clip.utterance_id + "' is empty");
  for (double s : clip.samples)
    if (!std::isfinite(s))
      Fail(ErrorKind::kValidation, "clip '" + clip.utterance_id + "' has non-finite samples");
}

double Rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

AudioClip ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kLoad, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Fail(ErrorKind::kFormat, path.string() + " is not a RIFF/WAVE file");

  int format = -1, channels = 0, rate = 0, bits = 0;
  const unsigned char *data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t len = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    if (body + len > bytes.size()) len = std::uint32_t(bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && len >= 16) {
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = int(ReadU32(chunk + 12));
      bits = ReadU16(chunk + 22);
      if (format == 0xFFFE && len >= 26) format = ReadU16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1u);
  }
  if (format < 0 || data == nullptr)
    Fail(ErrorKind::kFormat, path.string() + ": missing fmt or data chunk");
  if (channels != 1)
    Fail(ErrorKind::kFormat, path.string() + ": expected mono, got " +
                                 std::to_string(channels) + " channels");
  if (rate != kSampleRate)
    Fail(ErrorKind::kFormat, path.string() + ": expected 16000 Hz, got " +
                                 std::to_string(rate));

  AudioClip clip;
  clip.utterance_id = path.stem().string();
  if (format == 1 && bits == 16) {
    std::size_t n = data_len / 2;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = static_cast<std::int16_t>(ReadU16(data + 2 * i));
      clip.samples[i] = v / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    std::size_t n = data_len / 4;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t u = ReadU32(data + 4 * i);
      float f;
      std::memcpy(&f, &u, sizeof f);
      clip.samples[i] = f;
    }
  } else {
    Fail(ErrorKind::kFormat, path.string() + ": unsupported encoding (format " +
                                 std::to_string(format) + ", " + std::to_string(bits) +
                                 " bits)");
  }
  return clip;
}

void WriteWav(const std::filesystem::path &path, const AudioClip &clip,
              WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t bytes_per_sample = bits / 8;
  const auto data_len = std::uint32_t(clip.samples.size() * bytes_per_sample);

  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  PutU32(out, 36 + data_len);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, pcm ? 1 : 3);
  PutU16(out, 1);
  PutU32(out, std::uint32_t(clip.sample_rate));
  PutU32(out, std::uint32_t(clip.sample_rate) * bytes_per_sample);
  PutU16(out, std::uint16_t(bytes_per_sample));
  PutU16(out, bits);
  out += "data";
  PutU32(out, data_len);
  for (double s : clip.samples) {
    if (pcm) {
      double c = std::clamp(s, -1.0, 1.0) * 32767.0;
      PutU16(out, std::uint16_t(static_cast<std::int16_t>(std::lround(c))));
    } else {
      float f = static_cast<float>(s);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      PutU32(out, u);
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorKind::kLoad, "cannot write " + path.string());
  os.write(out.data(), std::streamsize(out.size()));
}

}  // namespace samix
