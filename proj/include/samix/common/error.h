// samix/common/error.h

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

#ifndef SAMIX_COMMON_ERROR_H_
#define SAMIX_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace samix {

enum class ErrorKind {
  kLoad,
  kParse,
  kValidation,
  kConfig,
  kFormat,
  kDegenerateSignal,
  kCorpus,
  kPlacement,
  kEnrollment,
  kTooShort,
  kInsufficientData,
  kShape,
  kNumeric,
  kMode,
  kSampling,
  kAlignment,
  kDegenerateBatch,
  kCheckpoint,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this type; callers branch on
// kind() rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string &what);

}  // namespace samix

#endif  // SAMIX_COMMON_ERROR_H_
