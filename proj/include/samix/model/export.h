// samix/model/export.h

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

#ifndef SAMIX_MODEL_EXPORT_H_
#define SAMIX_MODEL_EXPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "samix/common/tensor.h"

namespace samix::model {

// <stem>.f32 holds the layers back to back, each T x D row-major
// little-endian float32; <stem>.json records layers, frames, dim.
void ExportRepresentations(const std::filesystem::path &dir, const std::string &stem,
                           const std::vector<MatD> &layers,
                           const nlohmann::json &extra = nlohmann::json::object());
std::vector<MatD> ImportRepresentations(const std::filesystem::path &dir, const std::string &stem);

}  // namespace samix::model

#endif  // SAMIX_MODEL_EXPORT_H_
