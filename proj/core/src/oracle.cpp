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

// Brute-force stable-model enumeration. Deliberately shares no code with the
// goal-directed solver so that it can serve as its reference.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "chf/errors.hpp"
#include "chf/solver.hpp"

namespace chf {

namespace {

struct MaskRule {
  int head = -1;
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

// Least model of the reduct of `rules` w.r.t. `candidate`.
std::uint64_t reduct_least_model(const std::vector<MaskRule>& rules, std::uint64_t candidate) {
  std::uint64_t model = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (r.head < 0 || (r.neg & candidate) != 0) continue;
      std::uint64_t bit = std::uint64_t{1} << r.head;
      if ((model & bit) == 0 && (r.pos & model) == r.pos) {
        model |= bit;
        changed = true;
      }
    }
  }
  return model;
}

bool violates_constraint(const std::vector<MaskRule>& rules, std::uint64_t s) {
  return std::any_of(rules.begin(), rules.end(), [&](const MaskRule& r) {
    return r.head < 0 && (r.pos & s) == r.pos && (r.neg & s) == 0;
  });
}

}  // namespace

std::vector<StableModel> enumerate_stable_models_bruteforce(const GroundProgram& g,
                                                            std::size_t bound) {
  const auto& universe = g.atom_universe;
  const std::size_t n = universe.size();
  if (n > bound || n > 30) throw UniverseTooLarge(n, std::min<std::size_t>(bound, 30));

  std::map<Literal, int> bit;
  for (std::size_t i = 0; i < n; ++i) bit[universe[i]] = static_cast<int>(i);
  std::vector<MaskRule> rules;
  for (const auto& r : g.rules) {
    MaskRule m;
    if (r.head) m.head = bit.at(*r.head);
    for (const auto& e : r.body) {
      std::uint64_t b = std::uint64_t{1} << bit.at(e.literal);
      (e.kind == BodyElement::Kind::Naf ? m.neg : m.pos) |= b;
    }
    rules.push_back(m);
  }
  std::vector<std::pair<int, int>> complementary;
  for (std::size_t i = 0; i < n; ++i) {
    if (!universe[i].strong_neg) continue;
    auto it = bit.find(complement(universe[i]));
    if (it != bit.end()) complementary.emplace_back(static_cast<int>(i), it->second);
  }

  std::vector<StableModel> out;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < subsets; ++s) {
    bool consistent = std::none_of(complementary.begin(), complementary.end(), [&](auto p) {
      return ((s >> p.first) & 1) && ((s >> p.second) & 1);
    });
    if (!consistent) continue;
    if (reduct_least_model(rules, s) != s) continue;
    if (violates_constraint(rules, s)) continue;
    StableModel m;
    for (std::size_t i = 0; i < n; ++i) {
      if ((s >> i) & 1) m.atoms.push_back(universe[i]);
    }
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool check_stable(const GroundProgram& g, const std::vector<Literal>& s) {
  std::set<Literal> candidate(s.begin(), s.end());
  for (const auto& l : candidate) {
    if (candidate.contains(complement(l))) return false;
  }
  // Least model of the reduct by naive iteration.
  std::set<Literal> model;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (!r.head || model.contains(*r.head)) continue;
      bool fires = std::all_of(r.body.begin(), r.body.end(), [&](const BodyElement& e) {
        return e.kind == BodyElement::Kind::Naf ? !candidate.contains(e.literal)
                                                : model.contains(e.literal);
      });
      if (fires) {
        model.insert(*r.head);
        changed = true;
      }
    }
  }
  if (model != candidate) return false;
  for (const auto& r : g.rules) {
    if (r.head) continue;
    bool violated = std::all_of(r.body.begin(), r.body.end(), [&](const BodyElement& e) {
      return e.kind == BodyElement::Kind::Naf ? !candidate.contains(e.literal)
                                              : candidate.contains(e.literal);
    });
    if (violated) return false;
  }
  return true;
}

}  // namespace chf
