// samix/model/checkpoint.cc

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

#include "samix/model/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "samix/common/digest.h"
#include "samix/common/error.h"

namespace samix::model {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

namespace {

constexpr char kMagic[8] = {'S', 'A', 'M', 'I', 'X', 'C', 'K', 'P'};

void AppendTensor(std::string &out, const MatF &m) {
  out.append(reinterpret_cast<const char *>(m.data()), std::size_t(m.size()) * sizeof(float));
}

template <typename F>
void ForEachRecord(F &&f, Params<float> &params, std::optional<Params<float>> &m,
                   std::optional<Params<float>> &v) {
  VisitTensors([&](const std::string &name, MatF &t) { f("param/" + name, t); }, params);
  if (m) VisitTensors([&](const std::string &name, MatF &t) { f("adam_m/" + name, t); }, *m);
  if (v) VisitTensors([&](const std::string &name, MatF &t) { f("adam_v/" + name, t); }, *v);
}

}  // namespace

std::string ParamsDigest(const Params<float> &params) {
  std::string bytes;
  VisitTensors([&](const std::string &, MatF &t) { AppendTensor(bytes, t); },
               const_cast<Params<float> &>(params));
  return Sha256Hex(bytes);
}

void SaveCheckpoint(const std::filesystem::path &path, const Checkpoint &ckpt) {
  auto &c = const_cast<Checkpoint &>(ckpt);
  if (c.adam_m.has_value() != c.adam_v.has_value())
    Fail(ErrorKind::kCheckpoint, "optimizer moments must be saved together");
  nlohmann::json tensors = nlohmann::json::array();
  std::string payload;
  ForEachRecord(
      [&](const std::string &name, MatF &t) {
        tensors.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}});
        AppendTensor(payload, t);
      },
      c.params, c.adam_m, c.adam_v);
  nlohmann::json header = {{"model", ToJson(c.model)},
                           {"step", c.step},
                           {"alpha", c.alpha},
                           {"codebook_hash", c.codebook_hash},
                           {"meta", c.meta},
                           {"has_optimizer", c.adam_m.has_value()},
                           {"tensors", tensors},
                           {"payload_sha256", Sha256Hex(payload)}};
  const std::string text = header.dump();
  const std::uint32_t version = kCheckpointVersion;
  const std::uint64_t header_len = text.size();

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kCheckpoint, "cannot write " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char *>(&version), sizeof(version));
    out.write(reinterpret_cast<const char *>(&header_len), sizeof(header_len));
    out.write(text.data(), std::streamsize(text.size()));
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) Fail(ErrorKind::kCheckpoint, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const std::filesystem::path &path, const ModelConfig *expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kLoad, "cannot open checkpoint " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = "checkpoint " + path.string();
  constexpr std::size_t kPrefix = sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t);
  if (bytes.size() < kPrefix || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    Fail(ErrorKind::kCheckpoint, where + ": bad magic");
  std::uint32_t version = 0;
  std::uint64_t header_len = 0;
  std::memcpy(&version, bytes.data() + sizeof(kMagic), sizeof(version));
  std::memcpy(&header_len, bytes.data() + sizeof(kMagic) + sizeof(version), sizeof(header_len));
  if (version != kCheckpointVersion)
    Fail(ErrorKind::kCheckpoint, where + ": unsupported version " + std::to_string(version));
  if (header_len > bytes.size() - kPrefix) Fail(ErrorKind::kCheckpoint, where + ": truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(kPrefix, header_len));
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kCheckpoint, where + ": header is not JSON (" + e.what() + ")");
  }
  const std::string_view payload(bytes.data() + kPrefix + header_len,
                                 bytes.size() - kPrefix - header_len);

  Checkpoint c;
  try {
    c.model = ModelConfigFromJson(header.at("model"));
    c.step = header.at("step").get<std::int64_t>();
    c.alpha = header.at("alpha").get<double>();
    c.codebook_hash = header.at("codebook_hash").get<std::string>();
    c.meta = header.value("meta", nlohmann::json::object());
    if (Sha256Hex(payload) != header.at("payload_sha256").get<std::string>())
      Fail(ErrorKind::kCheckpoint, where + ": tensor payload digest mismatch (file corrupted)");
    if (expected && !(*expected == c.model))
      Fail(ErrorKind::kCheckpoint, where + ": model config differs from the requested one");

    c.params = AllocateParams<float>(c.model);
    if (header.at("has_optimizer").get<bool>()) {
      c.adam_m = AllocateParams<float>(c.model);
      c.adam_v = AllocateParams<float>(c.model);
    }
    const auto &tensors = header.at("tensors");
    std::size_t index = 0, offset = 0;
    ForEachRecord(
        [&](const std::string &name, MatF &t) {
          if (index >= tensors.size())
            Fail(ErrorKind::kCheckpoint, where + ": missing record " + name);
          const auto &rec = tensors[index++];
          if (rec.at("name").get<std::string>() != name || rec.at("rows").get<long>() != t.rows() ||
              rec.at("cols").get<long>() != t.cols())
            Fail(ErrorKind::kCheckpoint, where + ": record " + std::to_string(index - 1) +
                                             " does not match tensor " + name);
          const std::size_t n = std::size_t(t.size()) * sizeof(float);
          if (offset + n > payload.size())
            Fail(ErrorKind::kCheckpoint, where + ": truncated payload at " + name);
          std::memcpy(t.data(), payload.data() + offset, n);
          offset += n;
        },
        c.params, c.adam_m, c.adam_v);
    if (index != tensors.size() || offset != payload.size())
      Fail(ErrorKind::kCheckpoint, where + ": unexpected trailing records");
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kCheckpoint, where + ": malformed header (" + e.what() + ")");
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kCheckpoint) throw;
    Fail(ErrorKind::kCheckpoint, where + ": " + e.what());
  }
  return c;
}

}  // namespace samix::model
