// samix/mixsim/scenario.h

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

#ifndef SAMIX_MIXSIM_SCENARIO_H_
#define SAMIX_MIXSIM_SCENARIO_H_

#include <array>
#include <string>
#include <string_view>

#include "samix/common/rng.h"

namespace samix::mixsim {

enum class ScenarioKind { kClean = 0, kNoisySingle = 1, kOverlap = 2, kNoisyOverlap = 3 };

inline constexpr int kScenarioKindCount = 4;

std::string_view ScenarioKindName(ScenarioKind kind);
ScenarioKind ParseScenarioKind(std::string_view name);

inline bool IsTwoSpeaker(ScenarioKind k) {
  return k == ScenarioKind::kOverlap || k == ScenarioKind::kNoisyOverlap;
}
inline bool IsNoisy(ScenarioKind k) {
  return k == ScenarioKind::kNoisySingle || k == ScenarioKind::kNoisyOverlap;
}

// Fields that do not apply to the kind are left at zero.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kClean;
  double overlap_ratio = 0.0;
  double sir_db = 0.0;
  double snr_db = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SimulationConfig {
  // Indexed by ScenarioKind.
  std::array<double, kScenarioKindCount> priors{0.25, 0.25, 0.25, 0.25};
  Range overlap_ratio{0.0, 1.0};
  Range sir_db{-5.0, 5.0};
  Range snr_db{-5.0, 20.0};
  // Peak level above which the whole mixture is rescaled.
  double clip_peak = 0.99;

  void Validate() const;
};

ScenarioSpec SampleScenario(Rng &rng, const SimulationConfig &cfg);

}  // namespace samix::mixsim

#endif  // SAMIX_MIXSIM_SCENARIO_H_
