// Copyright 2026 The LDP A/B Testing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDP_AB_TOOLS_CLI_H_
#define LDP_AB_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace ldp_ab::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitIo = 4,
};

ExitCode ExitCodeFor(const absl::Status& status);

// Runs one command line. `args` excludes the program name. Data goes to
// `out` only when the command succeeds; diagnostics go to `err`.
int ParseAndDispatch(const std::vector<std::string>& args, std::istream& in,
                     std::ostream& out, std::ostream& err);

}  // namespace ldp_ab::cli

#endif  // LDP_AB_TOOLS_CLI_H_
