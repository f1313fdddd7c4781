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

#include <vector>

#include "chf/model.hpp"
#include "chf/parser.hpp"
#include "chf/solver.hpp"

namespace chf {

struct AbductiveResult {
  PartialAnswerSet answer;  // helper atoms stripped
  std::vector<Literal> assumed_true;   // sorted
  std::vector<Literal> assumed_false;  // sorted

  friend bool operator==(const AbductiveResult&, const AbductiveResult&) = default;
};

inline constexpr std::string_view kNegPrefix = "__neg_";

/// Adds the even-loop pair
///   a :- not __neg_a.    __neg_a :- not a.
/// for every ground instance of each declared abducible. Zero-arity
/// abducibles always get a pair; the others are instantiated for the atoms
/// of that signature occurring in the grounded program. Atoms that are
/// already facts get no pair. Pattern
/// declarations are expanded first. Throws ReservedPrefixCollision if a rule
/// already concludes a reserved atom.
Program transform_abducibles(const Program& p);

/// Solves `q` over the transformed program. Assumptions are the abducible
/// atoms whose truth value came from their even-loop pair. A negative
/// assumption is dropped when the atom is already false in the well-founded
/// model of `p` plus the positive assumptions.
std::vector<AbductiveResult> abduce(const Program& p, const Query& q, std::size_t limit,
                                    const SolveOptions& options = {});

}  // namespace chf
