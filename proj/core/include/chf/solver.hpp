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

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "chf/grounder.hpp"
#include "chf/model.hpp"
#include "chf/parser.hpp"

namespace chf {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct SolveOptions {
  std::size_t step_budget = 10'000'000;  // resolution steps per query
  std::size_t model_bound = 20;          // brute-force oracle universe bound
};

/// Literals gathered along one successful derivation: `positive` were proved
/// true, `nafs` were proved unprovable (rendered "not l"). Both sorted.
struct PartialAnswerSet {
  Binding bindings;
  std::vector<Literal> positive;
  std::vector<Literal> nafs;

  friend bool operator==(const PartialAnswerSet&, const PartialAnswerSet&) = default;
};

struct StableModel {
  std::vector<Literal> atoms;  // sorted

  bool contains(const Literal& l) const;
  friend bool operator==(const StableModel&, const StableModel&) = default;
  friend auto operator<=>(const StableModel&, const StableModel&) = default;
};

// positive ⊆ m and nafs ∩ m = ∅
bool compatible(const PartialAnswerSet& answer, const StableModel& m);

/// Goal-directed evaluator over one ground program. Construction indexes the
/// program; each query call owns its own search state, so a const Solver can
/// serve concurrent queries.
class Solver {
 public:
  enum class Next { Continue, NextBinding, Stop };
  using Visitor = std::function<Next(const PartialAnswerSet&)>;

  explicit Solver(const GroundProgram& g, SolveOptions options = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  /// Depth-first enumeration of distinct answers: query bindings are tried
  /// in universe order, rules in program order, leftmost goal first. Each
  /// reported answer extends to some stable model of the program.
  void for_each_answer(const Query& q, const Visitor& visit) const;

  std::vector<PartialAnswerSet> solve(const Query& q, std::size_t limit = kUnlimited) const;

  /// Some stable model containing every literal of `must_hold` and none of
  /// `must_fail`, if one exists.
  std::optional<StableModel> find_model(const std::vector<Literal>& must_hold,
                                        const std::vector<Literal>& must_fail) const;

  /// Truth value in the well-founded model: true, false, or nullopt when
  /// undefined. Atoms outside the universe are false.
  std::optional<bool> well_founded(const Literal& l) const;

  const GroundProgram& program() const;

  struct Index;  // opaque

 private:
  std::unique_ptr<Index> index_;
  SolveOptions options_;
};

std::vector<PartialAnswerSet> solve(const GroundProgram& g, const Query& q,
                                    std::size_t limit = kUnlimited,
                                    const SolveOptions& options = {});

/// Reference semantics: every subset S of the universe whose
/// Gelfond-Lifschitz reduct has least model S, that is classically
/// consistent and violates no constraint. Exponential; throws
/// UniverseTooLarge above `bound` atoms.
std::vector<StableModel> enumerate_stable_models_bruteforce(const GroundProgram& g,
                                                            std::size_t bound = 20);

bool check_stable(const GroundProgram& g, const std::vector<Literal>& s);

}  // namespace chf
