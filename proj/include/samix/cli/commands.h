// samix/cli/commands.h

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

#ifndef SAMIX_CLI_COMMANDS_H_
#define SAMIX_CLI_COMMANDS_H_

#include <string>
#include <vector>

namespace samix::cli {

inline constexpr const char *kVersion = "0.1.0";

enum ExitStatus { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

// argv without the program name. Validation problems (bad flags, unknown
// command, config errors) return 1; failures while running return 2.
int Dispatch(const std::vector<std::string> &args);

}  // namespace samix::cli

#endif  // SAMIX_CLI_COMMANDS_H_
