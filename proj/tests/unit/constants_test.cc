// samix/tests/unit/constants_test.cc

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

#include <gtest/gtest.h>

#include "samix/cli/run_config.h"
#include "samix/common/audio.h"
#include "samix/labeler/features.h"
#include "samix/model/config.h"
#include "samix/trainer/config.h"

namespace samix {
namespace {

TEST(ConstantsTest, AbsentSlotMixingRate) {
  EXPECT_DOUBLE_EQ(trainer::TrainConfig{}.alpha, 0.5);
  EXPECT_DOUBLE_EQ(cli::ValidateConfig(nlohmann::json::object()).trainer.alpha, 0.5);
}

TEST(ConstantsTest, OnlyFirstLayerIsSpeakerAdapted) {
  EXPECT_EQ(model::ModelConfig{}.satl_layer_index, 1);
}

TEST(ConstantsTest, TwentyMillisecondStride) {
  model::ModelConfig m;
  EXPECT_DOUBLE_EQ(double(m.total_stride()) / kSampleRate, 0.020);
  EXPECT_DOUBLE_EQ(labeler::FeatureConfig{}.frame_rate(), 50.0);
}

TEST(ConstantsTest, SixteenKilohertzAudio) { EXPECT_EQ(kSampleRate, 16000); }

TEST(ConstantsTest, SilenceTokenExtendsVocabulary) {
  model::ModelConfig m;
  EXPECT_EQ(m.vocabulary(), m.K + 1);
}

}  // namespace
}  // namespace samix
