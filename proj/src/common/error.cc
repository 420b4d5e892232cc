// samix/common/error.cc

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

#include "samix/common/error.h"

namespace samix {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kLoad: return "load";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kDegenerateSignal: return "degenerate-signal";
    case ErrorKind::kCorpus: return "corpus";
    case ErrorKind::kPlacement: return "placement";
    case ErrorKind::kEnrollment: return "enrollment";
    case ErrorKind::kTooShort: return "too-short";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kMode: return "mode";
    case ErrorKind::kSampling: return "sampling";
    case ErrorKind::kAlignment: return "alignment";
    case ErrorKind::kDegenerateBatch: return "degenerate-batch";
    case ErrorKind::kCheckpoint: return "checkpoint";
  }
  return "unknown";
}

void Fail(ErrorKind kind, const std::string &what) {
  throw Error(kind, std::string(ErrorKindName(kind)) + " error: " + what);
}

}  // namespace samix
