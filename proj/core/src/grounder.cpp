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

#include "chf/grounder.hpp"

#include <algorithm>
#include <set>

#include "chf/errors.hpp"
#include "chf/patterns.hpp"

namespace chf {

namespace {

void add_terms(const Literal& l, std::set<Term>& out) {
  for (const auto& t : l.atom.args) {
    if (!t.is_variable()) out.insert(t);
  }
}

void add_terms(const std::vector<BodyElement>& body, std::set<Term>& out) {
  for (const auto& e : body) {
    if (e.kind == BodyElement::Kind::Builtin) {
      if (!e.builtin.lhs.is_variable()) out.insert(e.builtin.lhs);
      if (!e.builtin.rhs.is_variable()) out.insert(e.builtin.rhs);
    } else {
      add_terms(e.literal, out);
    }
  }
}

void check_builtins(const Rule& r) {
  for (const auto& e : r.body) {
    if (e.kind != BodyElement::Kind::Builtin) continue;
    for (const Term* t : {&e.builtin.lhs, &e.builtin.rhs}) {
      if (t->is_constant()) {
        throw GroundError("comparison over non-number '" + t->name + "' in rule: " +
                          to_string(r));
      }
    }
  }
}

// Evaluates builtins of a ground rule. Returns false if one fails or
// compares a non-number.
bool strip_builtins(Rule& r) {
  std::vector<BodyElement> kept;
  kept.reserve(r.body.size());
  for (auto& e : r.body) {
    if (e.kind != BodyElement::Kind::Builtin) {
      kept.push_back(std::move(e));
      continue;
    }
    const auto& b = e.builtin;
    if (!b.lhs.is_number() || !b.rhs.is_number()) return false;
    if (!evaluate(b.op, b.lhs.number, b.rhs.number)) return false;
  }
  r.body = std::move(kept);
  return true;
}

bool has_builtin(const Rule& r) {
  return std::any_of(r.body.begin(), r.body.end(), [](const BodyElement& e) {
    return e.kind == BodyElement::Kind::Builtin;
  });
}

}  // namespace

std::vector<Term> herbrand_domain(const Program& p) {
  std::set<Term> terms;
  for (const auto& r : p.rules) {
    if (r.head) add_terms(*r.head, terms);
    add_terms(r.body, terms);
  }
  return {terms.begin(), terms.end()};
}

std::vector<Literal> collect_universe(const std::vector<Rule>& rules) {
  std::set<Literal> atoms;
  for (const auto& r : rules) {
    if (r.head) atoms.insert(*r.head);
    for (const auto& e : r.body) {
      if (e.kind != BodyElement::Kind::Builtin) atoms.insert(e.literal);
    }
  }
  return {atoms.begin(), atoms.end()};
}

GroundProgram ground_program(const Program& input) {
  const Program p = input.patterns.empty() ? input : patterns::expand_program(input);
  for (const auto& r : p.rules) {
    if (auto v = unsafe_variable(r)) {
      throw GroundError("unsafe variable " + *v + " in rule: " + to_string(r));
    }
    check_builtins(r);
  }

  const std::vector<Term> domain = herbrand_domain(p);
  GroundProgram g;
  for (const auto& r : p.rules) {
    const std::vector<std::string> vars = variables_of(r);
    std::size_t survivors = 0;
    if (vars.empty()) {
      Rule copy = r;
      if (strip_builtins(copy)) {
        g.rules.push_back(std::move(copy));
        ++survivors;
      }
    } else if (!domain.empty()) {
      std::vector<std::size_t> idx(vars.size(), 0);
      Binding b;
      for (;;) {
        for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = domain[idx[i]];
        Rule inst = apply_binding(r, b);
        if (strip_builtins(inst)) {
          g.rules.push_back(std::move(inst));
          ++survivors;
        }
        // Odometer: last variable varies fastest.
        std::size_t k = vars.size();
        while (k > 0 && ++idx[k - 1] == domain.size()) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    if (survivors == 0 && has_builtin(r)) {
      g.warnings.push_back("line " + std::to_string(r.line) +
                           ": no instance survives its comparisons: " + to_string(r));
    }
  }
  g.atom_universe = collect_universe(g.rules);
  return g;
}

}  // namespace chf
