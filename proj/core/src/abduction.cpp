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

#include "chf/abduction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "chf/errors.hpp"
#include "chf/grounder.hpp"
#include "chf/patterns.hpp"

namespace chf {

namespace {

Literal helper_for(const Literal& l) {
  Literal h = l;
  h.atom.predicate = std::string(kNegPrefix) + l.atom.predicate;
  return h;
}

bool is_helper(const Literal& l) { return l.atom.predicate.starts_with(kNegPrefix); }

Literal original_of(const Literal& helper) {
  Literal l = helper;
  l.atom.predicate = helper.atom.predicate.substr(kNegPrefix.size());
  return l;
}

}  // namespace

Program transform_abducibles(const Program& input) {
  Program p = input.patterns.empty() ? input : patterns::expand_program(input);
  for (const auto& r : p.rules) {
    if (r.head && r.head->atom.predicate.starts_with(kReservedPrefix)) {
      throw ReservedPrefixCollision("rule concludes reserved atom: " + to_string(r));
    }
  }
  if (p.abducibles.empty()) return p;

  std::set<Signature> wanted(p.abducibles.begin(), p.abducibles.end());
  std::vector<Literal> instances;
  for (const auto& sig : p.abducibles) {
    if (sig.arity == 0) instances.push_back(Literal{Atom{sig.name, {}}, false});
  }
  GroundProgram g = ground_program(p);
  for (const auto& l : g.atom_universe) {
    if (l.strong_neg || l.atom.arity() == 0) continue;
    if (wanted.contains(Signature{l.atom.predicate, l.atom.arity()})) instances.push_back(l);
  }
  // Given facts need no explanation.
  std::set<Literal> facts;
  for (const auto& r : g.rules) {
    if (r.is_fact()) facts.insert(*r.head);
  }
  std::erase_if(instances, [&](const Literal& l) { return facts.contains(l); });

  for (const auto& a : instances) {
    Literal helper = helper_for(a);
    Rule assume;
    assume.head = a;
    assume.body = {BodyElement::naf(helper)};
    Rule reject;
    reject.head = helper;
    reject.body = {BodyElement::naf(a)};
    p.rules.push_back(std::move(assume));
    p.rules.push_back(std::move(reject));
  }
  return p;
}

std::vector<AbductiveResult> abduce(const Program& p, const Query& q, std::size_t limit,
                                    const SolveOptions& options) {
  std::vector<AbductiveResult> out;
  if (limit == 0) return out;
  Solver solver(ground_program(transform_abducibles(p)), options);
  std::map<std::vector<Literal>, Solver> with_assumptions;
  // Original program plus the positive assumptions as facts.
  auto base = [&](const std::vector<Literal>& assumed) -> const Solver& {
    auto it = with_assumptions.find(assumed);
    if (it == with_assumptions.end()) {
      Program extended = p;
      for (const auto& l : assumed) extended.rules.push_back(Rule{l, {}, 0});
      it = with_assumptions.emplace(assumed, Solver(ground_program(extended), options)).first;
    }
    return it->second;
  };
  solver.for_each_answer(q, [&](const PartialAnswerSet& raw) {
    AbductiveResult r;
    r.answer.bindings = raw.bindings;
    for (const auto& l : raw.positive) {
      if (is_helper(l)) {
        r.assumed_false.push_back(original_of(l));
      } else {
        r.answer.positive.push_back(l);
      }
    }
    for (const auto& l : raw.nafs) {
      if (is_helper(l)) {
        r.assumed_true.push_back(original_of(l));
      } else {
        r.answer.nafs.push_back(l);
      }
    }
    std::sort(r.assumed_true.begin(), r.assumed_true.end());
    std::sort(r.assumed_false.begin(), r.assumed_false.end());
    if (!r.assumed_false.empty()) {
      const Solver& b = base(r.assumed_true);
      std::erase_if(r.assumed_false, [&](const Literal& l) { return b.well_founded(l) == false; });
    }
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
    return out.size() >= limit ? Solver::Next::Stop : Solver::Next::Continue;
  });
  return out;
}

}  // namespace chf
