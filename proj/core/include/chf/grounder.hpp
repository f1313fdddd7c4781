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

#include <string>
#include <vector>

#include "chf/model.hpp"

namespace chf {

/// Variable-free program. Builtins are evaluated away: rules whose
/// comparisons held keep the remaining body, the others are dropped.
struct GroundProgram {
  std::vector<Rule> rules;
  std::vector<Literal> atom_universe;  // sorted, unique
  std::vector<std::string> warnings;
};

/// Naive Herbrand instantiation. Variables range over every constant and
/// number occurring as an argument anywhere in `p`; bindings are visited in
/// lexicographic order of the sorted domain. Pattern declarations are
/// expanded first.
///
/// Throws GroundError for unsafe rules and for comparisons whose source
/// operands are non-numeric constants.
GroundProgram ground_program(const Program& p);

// Sorted constant/number domain of a program.
std::vector<Term> herbrand_domain(const Program& p);

std::vector<Literal> collect_universe(const std::vector<Rule>& rules);

}  // namespace chf
