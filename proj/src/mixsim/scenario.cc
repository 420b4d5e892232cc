// samix/mixsim/scenario.cc

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

#include "samix/mixsim/scenario.h"

#include <cmath>
#include <string>

#include "samix/common/error.h"

namespace samix::mixsim {

std::string_view ScenarioKindName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kClean: return "clean";
    case ScenarioKind::kNoisySingle: return "noisy_single";
    case ScenarioKind::kOverlap: return "overlap";
    case ScenarioKind::kNoisyOverlap: return "noisy_overlap";
  }
  return "clean";
}

ScenarioKind ParseScenarioKind(std::string_view name) {
  for (int k = 0; k < kScenarioKindCount; ++k)
    if (ScenarioKindName(ScenarioKind(k)) == name) return ScenarioKind(k);
  Fail(ErrorKind::kConfig, "unknown scenario kind '" + std::string(name) + "'");
}

void SimulationConfig::Validate() const {
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0) || !std::isfinite(p))
      Fail(ErrorKind::kConfig, "scenario probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    Fail(ErrorKind::kConfig,
         "scenario probabilities sum to " + std::to_string(sum) + ", expected 1");
  auto check = [](const Range &r, const char *name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
      Fail(ErrorKind::kConfig, std::string("invalid range for ") + name);
  };
  check(overlap_ratio, "overlap_ratio");
  check(sir_db, "sir_db");
  check(snr_db, "snr_db");
  if (overlap_ratio.lo < 0.0 || overlap_ratio.hi > 1.0)
    Fail(ErrorKind::kConfig, "overlap_ratio range must lie in [0, 1]");
  if (!(clip_peak > 0.0 && clip_peak <= 1.0))
    Fail(ErrorKind::kConfig, "clip_peak must lie in (0, 1]");
}

ScenarioSpec SampleScenario(Rng &rng, const SimulationConfig &cfg) {
  cfg.Validate();
  double u = Uniform(rng, 0.0, 1.0);
  int kind = kScenarioKindCount - 1;
  double acc = 0.0;
  for (int k = 0; k < kScenarioKindCount; ++k) {
    acc += cfg.priors[k];
    if (u < acc && cfg.priors[k] > 0.0) {
      kind = k;
      break;
    }
  }
  // Guard against rounding past the last nonzero prior.
  while (cfg.priors[kind] == 0.0 && kind > 0) --kind;

  ScenarioSpec spec;
  spec.kind = ScenarioKind(kind);
  if (IsTwoSpeaker(spec.kind)) {
    spec.overlap_ratio = Uniform(rng, cfg.overlap_ratio.lo, cfg.overlap_ratio.hi);
    spec.sir_db = Uniform(rng, cfg.sir_db.lo, cfg.sir_db.hi);
  }
  if (IsNoisy(spec.kind)) spec.snr_db = Uniform(rng, cfg.snr_db.lo, cfg.snr_db.hi);
  return spec;
}

}  // namespace samix::mixsim
