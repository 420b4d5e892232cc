// samix/common/log.h

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

#ifndef SAMIX_COMMON_LOG_H_
#define SAMIX_COMMON_LOG_H_

#include <spdlog/spdlog.h>

namespace samix {

// Reads SAMIX_LOG_LEVEL (debug|info|warn|error); defaults to info.
void InitLogging();

}  // namespace samix

#endif  // SAMIX_COMMON_LOG_H_
