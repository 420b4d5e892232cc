// samix/model/export.cc

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

#include "samix/model/export.h"

#include <bit>
#include <fstream>

#include "samix/common/error.h"

namespace samix::model {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

void ExportRepresentations(const std::filesystem::path &dir, const std::string &stem,
                           const std::vector<MatD> &layers, const nlohmann::json &extra) {
  if (layers.empty()) Fail(ErrorKind::kShape, "nothing to export");
  const auto T = layers[0].rows(), D = layers[0].cols();
  for (const auto &l : layers)
    if (l.rows() != T || l.cols() != D) Fail(ErrorKind::kShape, "layers differ in shape");
  std::filesystem::create_directories(dir);
  std::ofstream bin(dir / (stem + ".f32"), std::ios::binary);
  for (const auto &l : layers) {
    const MatF f = l.cast<float>();
    bin.write(reinterpret_cast<const char *>(f.data()), std::streamsize(f.size() * sizeof(float)));
  }
  if (!bin) Fail(ErrorKind::kLoad, "cannot write " + (dir / (stem + ".f32")).string());
  nlohmann::json side = extra;
  side["layers"] = layers.size();
  side["frames"] = T;
  side["dim"] = D;
  side["dtype"] = "float32";
  side["layout"] = "layer, frame, dim";
  std::ofstream(dir / (stem + ".json")) << side.dump(2) << "\n";
}

std::vector<MatD> ImportRepresentations(const std::filesystem::path &dir, const std::string &stem) {
  std::ifstream js(dir / (stem + ".json"));
  if (!js) Fail(ErrorKind::kLoad, "missing sidecar for " + stem);
  const auto side = nlohmann::json::parse(js);
  const std::size_t L = side.at("layers"), T = side.at("frames"), D = side.at("dim");
  std::ifstream bin(dir / (stem + ".f32"), std::ios::binary);
  std::vector<MatD> out;
  for (std::size_t l = 0; l < L; ++l) {
    MatF f = MatF::Zero(Eigen::Index(T), Eigen::Index(D));
    bin.read(reinterpret_cast<char *>(f.data()), std::streamsize(f.size() * sizeof(float)));
    if (!bin) Fail(ErrorKind::kFormat, stem + ".f32 is shorter than its sidecar says");
    out.push_back(f.cast<double>());
  }
  return out;
}

}  // namespace samix::model
