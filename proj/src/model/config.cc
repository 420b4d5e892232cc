// samix/model/config.cc

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

#include "samix/model/config.h"

#include <set>
#include <string>

#include "samix/common/error.h"

namespace samix::model {

int ModelConfig::total_stride() const {
  int s = 1;
  for (int v : conv_strides) s *= v;
  return s;
}

int ModelConfig::receptive_field() const {
  int field = 1, jump = 1;
  for (std::size_t i = 0; i < conv_kernels.size(); ++i) {
    field += (conv_kernels[i] - 1) * jump;
    jump *= conv_strides[i];
  }
  return field;
}

int ModelConfig::FrameCount(std::size_t samples) const {
  // The waveform is zero-padded by receptive_field - total_stride so that
  // the frame count is floor(samples / total_stride).
  if (samples < std::size_t(receptive_field())) return 0;
  return int(samples / std::size_t(total_stride()));
}

void ModelConfig::Validate() const {
  auto bad = [](const std::string &what) { Fail(ErrorKind::kConfig, "model." + what); };
  if (D <= 0 || E <= 0) bad("D and E must be positive");
  if (layer_count < 1) bad("layer_count must be >= 1");
  if (satl_layer_index < 1 || satl_layer_index > layer_count)
    bad("satl_layer_index " + std::to_string(satl_layer_index) + " outside [1, " +
        std::to_string(layer_count) + "]");
  if (attention_heads < 1 || D % attention_heads != 0)
    bad("attention_heads must divide D");
  if (ffn_dim < 1) bad("ffn_dim must be positive");
  if (K < 1) bad("K must be positive");
  if (!(mask_start_prob >= 0.0 && mask_start_prob <= 1.0)) bad("mask_start_prob outside [0, 1]");
  if (mask_span <= 0) bad("mask_span must be positive");
  if (conv_channels < 1) bad("conv_channels must be positive");
  if (conv_kernels.empty() || conv_kernels.size() != conv_strides.size())
    bad("conv_kernels and conv_strides must have equal nonzero length");
  for (std::size_t i = 0; i < conv_kernels.size(); ++i)
    if (conv_kernels[i] < 1 || conv_strides[i] < 1) bad("conv kernels/strides must be positive");
  if (total_stride() != 320) bad("conv strides must multiply to 320 (20 ms at 16 kHz)");
  if (receptive_field() < total_stride()) bad("receptive field shorter than the total stride");
  if (pos_conv_kernel < 1 || pos_conv_kernel % 2 == 0) bad("pos_conv_kernel must be odd");
  if (!(norm_epsilon > 0.0)) bad("norm_epsilon must be positive");
}

nlohmann::json ToJson(const ModelConfig &c) {
  return {{"D", c.D},
          {"E", c.E},
          {"layer_count", c.layer_count},
          {"satl_layer_index", c.satl_layer_index},
          {"attention_heads", c.attention_heads},
          {"ffn_dim", c.ffn_dim},
          {"K", c.K},
          {"mask_start_prob", c.mask_start_prob},
          {"mask_span", c.mask_span},
          {"conv_channels", c.conv_channels},
          {"conv_kernels", c.conv_kernels},
          {"conv_strides", c.conv_strides},
          {"pos_conv_kernel", c.pos_conv_kernel},
          {"norm_epsilon", c.norm_epsilon}};
}

ModelConfig ModelConfigFromJson(const nlohmann::json &j) {
  ModelConfig c;
  static const std::set<std::string> known = {
      "D", "E", "layer_count", "satl_layer_index", "attention_heads", "ffn_dim", "K",
      "mask_start_prob", "mask_span", "conv_channels", "conv_kernels", "conv_strides",
      "pos_conv_kernel", "norm_epsilon"};
  for (const auto &[key, value] : j.items())
    if (!known.count(key)) Fail(ErrorKind::kConfig, "unknown key 'model." + key + "'");
  auto get = [&](const char *key, auto &field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception &) {
      Fail(ErrorKind::kConfig, std::string("type mismatch at 'model.") + key + "'");
    }
  };
  get("D", c.D);
  get("E", c.E);
  get("layer_count", c.layer_count);
  get("satl_layer_index", c.satl_layer_index);
  get("attention_heads", c.attention_heads);
  get("ffn_dim", c.ffn_dim);
  get("K", c.K);
  get("mask_start_prob", c.mask_start_prob);
  get("mask_span", c.mask_span);
  get("conv_channels", c.conv_channels);
  get("conv_kernels", c.conv_kernels);
  get("conv_strides", c.conv_strides);
  get("pos_conv_kernel", c.pos_conv_kernel);
  get("norm_epsilon", c.norm_epsilon);
  c.Validate();
  return c;
}

}  // namespace samix::model
