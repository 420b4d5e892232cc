// samix/model/config.h

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

#ifndef SAMIX_MODEL_CONFIG_H_
#define SAMIX_MODEL_CONFIG_H_

#include <vector>

#include <json.hpp>

namespace samix::model {

struct ModelConfig {
  int D = 64;                 // feature / model dimension
  int E = 32;                 // speaker embedding dimension
  int layer_count = 4;
  int satl_layer_index = 1;   // 1-based; the only speaker-adapted layer
  int attention_heads = 4;
  int ffn_dim = 256;
  int K = 32;                 // k-means clusters; vocabulary is K + 1
  double mask_start_prob = 0.065;
  int mask_span = 10;
  int conv_channels = 64;
  std::vector<int> conv_kernels{10, 8, 4, 4};
  std::vector<int> conv_strides{8, 5, 4, 2};
  int pos_conv_kernel = 31;
  double norm_epsilon = 1e-5;

  int vocabulary() const { return K + 1; }
  int total_stride() const;
  // Samples seen by one output frame of the convolutional stack.
  int receptive_field() const;
  // Frames produced for `samples` input samples (0 if too short).
  int FrameCount(std::size_t samples) const;
  void Validate() const;

  bool operator==(const ModelConfig &) const = default;
};

nlohmann::json ToJson(const ModelConfig &cfg);
// Missing keys take defaults; unknown keys are rejected.
ModelConfig ModelConfigFromJson(const nlohmann::json &j);

}  // namespace samix::model

#endif  // SAMIX_MODEL_CONFIG_H_
