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

#include "chf/patterns.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

#include "chf/errors.hpp"

namespace chf::patterns {

namespace {

BodyElement pos(Literal l) { return BodyElement::pos(std::move(l)); }
BodyElement naf(Literal l) { return BodyElement::naf(std::move(l)); }

Literal contraindication(std::string_view c) { return unary(kContraindication, c); }

Rule make_rule(Literal head, std::vector<BodyElement> body) {
  Rule r;
  r.head = std::move(head);
  r.body = std::move(body);
  return r;
}

std::vector<BodyElement> concat(std::vector<BodyElement> a, const std::vector<BodyElement>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_name(const Choice& c, const std::string& field, bool with_class) {
  if (c.name.empty()) throw MalformedPattern(field, "missing choice name");
  if (c.name.starts_with(kReservedPrefix)) throw MalformedPattern(field, "reserved name");
  if (with_class && c.cls.empty()) throw MalformedPattern(field, "missing class label");
}

void require_choices(const PatternDecl& d, std::size_t n) {
  if (d.choices.size() != n) {
    throw MalformedPattern("choices", std::string(to_string(d.kind)) + " needs " +
                                          std::to_string(n) + " choice(s)");
  }
}

std::string canonical_key(const Rule& r) {
  std::vector<std::string> body;
  for (const auto& e : r.body) body.push_back(to_string(e));
  std::sort(body.begin(), body.end());
  body.erase(std::unique(body.begin(), body.end()), body.end());
  std::string key = r.head ? to_string(*r.head) : std::string();
  for (const auto& b : body) key += "\x1f" + b;
  return key;
}

bool has_naf(const Rule& r, const Literal& l) {
  return std::any_of(r.body.begin(), r.body.end(), [&](const BodyElement& e) {
    return e.kind == BodyElement::Kind::Naf && e.literal == l;
  });
}

}  // namespace

Literal recommendation(std::string_view choice, std::string_view cls) {
  return Literal{Atom{std::string(kRecommendation),
                      {Term::constant(std::string(choice)), Term::constant(std::string(cls))}},
                 false};
}

Literal unary(std::string_view predicate, std::string_view choice) {
  return Literal{Atom{std::string(predicate), {Term::constant(std::string(choice))}}, false};
}

void validate(const PatternDecl& d) {
  switch (d.kind) {
    case PatternKind::Aggressive:
    case PatternKind::Conservative:
    case PatternKind::AntiRecommendation: {
      require_choices(d, 1);
      require_name(d.choices[0], "choice", d.kind != PatternKind::AntiRecommendation);
      if (d.kind == PatternKind::AntiRecommendation && d.dangers.empty()) {
        throw MalformedPattern("dangers", "anti-recommendation needs at least one danger");
      }
      for (const auto& entry : d.dangers) {
        if (entry.empty()) throw MalformedPattern("dangers", "empty danger conjunction");
        if (d.kind == PatternKind::Conservative &&
            (entry.size() != 1 || entry[0].kind != BodyElement::Kind::Positive)) {
          throw MalformedPattern("dangers",
                                 "conservative dangers must be single positive literals");
        }
      }
      break;
    }
    case PatternKind::Preference:
    case PatternKind::Concomitant:
    case PatternKind::Indispensable:
      require_choices(d, 2);
      require_name(d.choices[0], "first", true);
      require_name(d.choices[1], "second", true);
      if (d.choices[0].name == d.choices[1].name) {
        throw MalformedPattern("choices", "the two choices must differ");
      }
      break;
    case PatternKind::Incompatible: {
      if (d.group_class.empty()) throw MalformedPattern("class", "missing class label");
      std::set<std::string> names;
      for (const auto& c : d.choices) {
        require_name(c, "group", false);
        names.insert(c.name);
      }
      if (names.size() < 2) {
        throw MalformedPattern("group", "incompatible groups need at least 2 distinct choices");
      }
      if (names.size() != d.choices.size()) {
        throw MalformedPattern("group", "duplicate choice in incompatible group");
      }
      break;
    }
  }
  if (d.kind != PatternKind::Concomitant && d.kind != PatternKind::Indispensable &&
      !d.when.empty()) {
    throw MalformedPattern("when", "when([...]) only applies to concomitant/indispensable");
  }
}

std::vector<Rule> expand(const PatternDecl& d) {
  validate(d);
  std::vector<Rule> out;
  switch (d.kind) {
    case PatternKind::Aggressive:
    case PatternKind::Conservative: {
      const Choice& c = d.choices[0];
      out.push_back(make_rule(recommendation(c.name, c.cls),
                              concat(d.conditions, {naf(contraindication(c.name))})));
      for (const auto& entry : d.dangers) {
        if (d.kind == PatternKind::Aggressive) {
          out.push_back(make_rule(contraindication(c.name), entry));
        } else {
          // Absence of danger must be established explicitly.
          out.push_back(make_rule(contraindication(c.name), {naf(complement(entry[0].literal))}));
        }
      }
      break;
    }
    case PatternKind::AntiRecommendation:
      for (const auto& entry : d.dangers) {
        out.push_back(make_rule(contraindication(d.choices[0].name), entry));
      }
      break;
    case PatternKind::Preference: {
      const Choice& first = d.choices[0];
      const Choice& second = d.choices[1];
      out.push_back(make_rule(recommendation(first.name, first.cls),
                              concat(d.conditions, {naf(contraindication(first.name))})));
      out.push_back(make_rule(
          recommendation(second.name, second.cls),
          concat(d.conditions, {pos(contraindication(first.name)),
                                naf(contraindication(second.name)), naf(unary(kTaboo, second.name))})));
      break;
    }
    case PatternKind::Concomitant: {
      const Choice& trigger = d.choices[0];
      const Choice& with = d.choices[1];
      out.push_back(make_rule(recommendation(trigger.name, trigger.cls),
                              concat(d.conditions, {naf(contraindication(trigger.name)),
                                                    naf(unary(kSkipConcomitant, trigger.name))})));
      out.push_back(make_rule(unary(kSkipConcomitant, trigger.name),
                              concat(d.when, {naf(recommendation(with.name, with.cls)),
                                              naf(contraindication(with.name))})));
      out.push_back(make_rule(recommendation(with.name, with.cls),
                              concat(d.when, {pos(recommendation(trigger.name, trigger.cls)),
                                              naf(contraindication(with.name))})));
      break;
    }
    case PatternKind::Indispensable: {
      const Choice& trigger = d.choices[0];
      const Choice& needed = d.choices[1];
      out.push_back(make_rule(
          recommendation(trigger.name, trigger.cls),
          concat(d.conditions, {naf(contraindication(trigger.name)),
                                naf(unary(kAbsentIndispensable, trigger.name))})));
      out.push_back(make_rule(unary(kAbsentIndispensable, trigger.name),
                              concat({naf(recommendation(needed.name, needed.cls))}, d.when)));
      out.push_back(make_rule(recommendation(needed.name, needed.cls),
                              concat({pos(recommendation(trigger.name, trigger.cls)),
                                      naf(contraindication(needed.name))},
                                     d.when)));
      break;
    }
    case PatternKind::Incompatible:
      for (std::size_t i = 0; i < d.choices.size(); ++i) {
        std::vector<BodyElement> body = d.conditions;
        for (std::size_t j = 0; j < d.choices.size(); ++j) {
          if (j != i) body.push_back(pos(recommendation(d.choices[j].name, d.group_class)));
        }
        out.push_back(make_rule(unary(kTaboo, d.choices[i].name), std::move(body)));
      }
      break;
  }
  for (auto& r : out) r.line = d.line;
  return out;
}

Program expand_program(const Program& p) { return expand_programs({p}); }

Program expand_programs(const std::vector<Program>& parts) {
  struct Item {
    std::size_t part;
    int line;
    std::vector<Rule> rules;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& r : parts[i].rules) items.push_back({i, r.line, {r}});
    for (const auto& d : parts[i].patterns) items.push_back({i, d.line, expand(d)});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.part, a.line) < std::tie(b.part, b.line);
  });

  std::set<std::string> skip, absent, taboo;
  for (const auto& part : parts) {
    for (const auto& d : part.patterns) {
      if (d.kind == PatternKind::Concomitant) skip.insert(d.choices[0].name);
      if (d.kind == PatternKind::Indispensable) absent.insert(d.choices[0].name);
      if (d.kind == PatternKind::Incompatible) {
        for (const auto& c : d.choices) taboo.insert(c.name);
      }
    }
  }

  Program out;
  for (const auto& part : parts) {
    for (const auto& sig : part.abducibles) out.add_abducible(sig);
  }
  std::set<std::string> seen;
  for (auto& item : items) {
    for (auto& r : item.rules) {
      if (r.head && !r.head->strong_neg && r.head->atom.predicate == kRecommendation &&
          r.head->atom.arity() == 2 && r.head->atom.args[0].is_constant()) {
        const std::string& choice = r.head->atom.args[0].name;
        auto guard = [&](const std::set<std::string>& set, std::string_view pred) {
          Literal g = unary(pred, choice);
          if (set.contains(choice) && !has_naf(r, g)) r.body.push_back(naf(g));
        };
        guard(skip, kSkipConcomitant);
        guard(absent, kAbsentIndispensable);
        guard(taboo, kTaboo);
      }
      if (seen.insert(canonical_key(r)).second) out.rules.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace chf::patterns
