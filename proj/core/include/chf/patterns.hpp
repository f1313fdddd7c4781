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

// Knowledge-pattern compiler: turns the seven reasoning templates into plain
// rules before grounding.

#include <string_view>
#include <vector>

#include "chf/model.hpp"

namespace chf::patterns {

// Helper predicates produced by the templates.
inline constexpr std::string_view kRecommendation = "recommendation";
inline constexpr std::string_view kContraindication = "contraindication";
inline constexpr std::string_view kTaboo = "taboo_choice";
inline constexpr std::string_view kSkipConcomitant = "skip_concomitant_choice";
inline constexpr std::string_view kAbsentIndispensable = "absent_indispensable_choice";

// Throws MalformedPattern naming the offending field.
void validate(const PatternDecl& d);

/// Template expansion of a single declaration.
std::vector<Rule> expand(const PatternDecl& d);

/// Expands every declaration of `p` and links patterns together: each rule
/// concluding recommendation(X, _) receives the skip/absent/taboo guards of
/// every pattern in which X is a concomitant trigger, an indispensable
/// trigger or an incompatible member. Exact duplicate rules are dropped.
/// The result has no pattern declarations left.
Program expand_program(const Program& p);

// Same, for several documents kept in sequence (each one ordered by line).
Program expand_programs(const std::vector<Program>& parts);

Literal recommendation(std::string_view choice, std::string_view cls);
Literal unary(std::string_view predicate, std::string_view choice);

}  // namespace chf::patterns
