// samix/evalkit/gradcheck.h

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

#ifndef SAMIX_EVALKIT_GRADCHECK_H_
#define SAMIX_EVALKIT_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "samix/common/rng.h"
#include "samix/common/tensor.h"

namespace samix::evalkit {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "<tensor>[<index>]"
  int checked = 0;
};

struct GradCheckOptions {
  double step = 1e-5;
  // Entries with |analytic| and |numeric| both below this are compared
  // against it instead (relative error floor).
  double floor = 1e-4;
  // Per-tensor cap on checked entries; larger tensors are sampled.
  int max_entries = 64;
  std::uint64_t seed = 0;
};

// Central differences of `loss` with respect to `param`, compared to
// `analytic`. Entries of `param` are perturbed in place and restored.
void CompareTensor(const std::string &name, MatD &param, const MatD &analytic,
                   const std::function<double()> &loss, const GradCheckOptions &opt, Rng &rng,
                   GradCheckResult &result);

// Each check draws random parameters and inputs, takes the scalar loss
// sum(R * output) for a random R, and compares every parameter and input
// gradient.
GradCheckResult CheckClnGradients(int frames, int dim, int embed_dim,
                                  const GradCheckOptions &opt = {});
GradCheckResult CheckSatlGradients(int frames, int dim, const GradCheckOptions &opt = {});
GradCheckResult CheckSmbGradients(int frames, int dim, const GradCheckOptions &opt = {});
GradCheckResult CheckSaLossGradients(int frames, int vocabulary, const GradCheckOptions &opt = {});

}  // namespace samix::evalkit

#endif  // SAMIX_EVALKIT_GRADCHECK_H_
