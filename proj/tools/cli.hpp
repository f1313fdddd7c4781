// Copyright 2026 The CHF Advisor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The chf command line: solve, recommend, abduce and check-kb.

#include <ostream>
#include <string>
#include <vector>

namespace chf::cli {

/// Runs one invocation. `args` excludes the program name. Returns 0 when at
/// least one answer was printed, 1 for a valid run without answers and 2 for
/// usage, input or engine errors (reported on `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chf::cli
