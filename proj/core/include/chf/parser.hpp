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
#include <string_view>
#include <vector>

#include "chf/model.hpp"

namespace chf {

struct Query {
  std::vector<BodyElement> goals;  // conjunctive, source order

  friend bool operator==(const Query&, const Query&) = default;
};

struct ParseOptions {
  // Accept identifiers with the reserved "__" prefix. Only transformation
  // output re-read by tests needs this.
  bool allow_reserved = false;
};

/// Parses a whole .lp document: facts, rules, constraints, "%" comments and
/// the #abducible / #pattern directives. Throws ParseError (first error only)
/// or MalformedPattern for a syntactically valid but ill-formed #pattern.
Program parse_program(std::string_view src, const ParseOptions& options = {});

/// Parses "?- g1, not g2." The "?-" prefix and the final "." are optional.
Query parse_query(std::string_view src);

std::string print_program(const Program& p);
std::string print_pattern(const PatternDecl& d);
std::string print_query(const Query& q);

}  // namespace chf
