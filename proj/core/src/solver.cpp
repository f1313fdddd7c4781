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

#include "chf/solver.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "chf/errors.hpp"

namespace chf {

namespace {

struct IRule {
  int head = -1;  // -1: constraint
  std::vector<std::pair<int, bool>> body;  // (atom, is_naf), source order
  std::vector<int> pos;  // deduplicated
  std::vector<int> neg;  // deduplicated
};

struct Goal {
  int atom;
  bool positive;
};

}  // namespace

struct Solver::Index {
  GroundProgram program;
  std::unordered_map<Literal, int> ids;
  std::vector<IRule> rules;
  std::vector<std::vector<int>> by_head;
  std::vector<std::vector<int>> pos_occurrences;  // atom -> rules with it in pos
  std::vector<int> complement;
  std::vector<int> constraints;
  std::vector<int> naf_atoms;  // atoms occurring under "not", first-occurrence order
  std::vector<signed char> well_founded;  // 1 in every stable model, -1 in none

  explicit Index(const GroundProgram& g) : program(g) {
    const auto& universe = program.atom_universe;
    for (std::size_t i = 0; i < universe.size(); ++i) ids.emplace(universe[i], static_cast<int>(i));
    const std::size_t n = universe.size();
    by_head.resize(n);
    pos_occurrences.resize(n);
    complement.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = ids.find(chf::complement(universe[i]));
      if (it != ids.end()) complement[i] = it->second;
    }
    std::vector<char> is_naf_atom(n, 0);
    for (const auto& r : program.rules) {
      IRule ir;
      if (r.head) ir.head = ids.at(*r.head);
      for (const auto& e : r.body) {
        if (e.kind == BodyElement::Kind::Builtin) {
          throw GroundError("solver received a rule with an unevaluated comparison");
        }
        int id = ids.at(e.literal);
        bool naf = e.kind == BodyElement::Kind::Naf;
        ir.body.emplace_back(id, naf);
        auto& dst = naf ? ir.neg : ir.pos;
        if (std::find(dst.begin(), dst.end(), id) == dst.end()) dst.push_back(id);
        if (naf && !is_naf_atom[id]) {
          is_naf_atom[id] = 1;
          naf_atoms.push_back(id);
        }
      }
      int idx = static_cast<int>(rules.size());
      if (ir.head >= 0) {
        by_head[ir.head].push_back(idx);
      } else {
        constraints.push_back(idx);
      }
      for (int a : ir.pos) pos_occurrences[a].push_back(idx);
      rules.push_back(std::move(ir));
    }
    well_founded.assign(n, 0);
    std::vector<char> ct, cf, lower;
    if (propagate(std::vector<signed char>(n, 0), ct, cf, lower)) {
      for (std::size_t i = 0; i < n; ++i) well_founded[i] = ct[i] ? 1 : cf[i] ? -1 : 0;
    }
  }

  std::size_t size() const { return program.atom_universe.size(); }

  // Least model of the rules accepted by `enabled`, treating them as definite.
  template <class Enabled>
  std::vector<char> least_model(Enabled enabled) const {
    std::vector<char> in(size(), 0);
    std::vector<int> missing(rules.size(), 0);
    std::vector<char> on(rules.size(), 0);
    std::vector<int> queue;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const IRule& r = rules[i];
      if (r.head < 0 || !enabled(r)) continue;
      on[i] = 1;
      missing[i] = static_cast<int>(r.pos.size());
      if (missing[i] == 0 && !in[r.head]) {
        in[r.head] = 1;
        queue.push_back(r.head);
      }
    }
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      for (int ri : pos_occurrences[a]) {
        if (!on[ri] || --missing[ri] != 0) continue;
        int h = rules[ri].head;
        if (!in[h]) {
          in[h] = 1;
          queue.push_back(h);
        }
      }
    }
    return in;
  }

  // Alternating well-founded propagation under assumptions. `assigned`: 1
  // true, -1 false, 0 open. Fills the certainly-true/false sets and the least
  // model of the rules whose naf atoms are all certainly false.
  bool propagate(const std::vector<signed char>& assigned, std::vector<char>& ct,
                 std::vector<char>& cf, std::vector<char>& lower) const {
    const std::size_t n = size();
    cf.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) cf[i] = assigned[i] < 0;
    std::vector<char> upper;
    for (;;) {
      lower = least_model([&](const IRule& r) {
        return std::all_of(r.neg.begin(), r.neg.end(), [&](int a) { return cf[a] != 0; });
      });
      ct.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) ct[i] = lower[i] || assigned[i] > 0;
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (ct[i] && complement[i] >= 0) {
          if (ct[complement[i]]) return false;
          if (!cf[complement[i]]) {
            cf[complement[i]] = 1;
            changed = true;
          }
        }
      }
      upper = least_model([&](const IRule& r) {
        return std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return ct[a] != 0; });
      });
      for (std::size_t i = 0; i < n; ++i) {
        if (!upper[i] && !cf[i]) {
          cf[i] = 1;
          changed = true;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (ct[i] && cf[i]) return false;
      }
      if (!changed) return true;
    }
  }

  // Propagation followed by branching on undecided naf atoms.
  bool search_model(std::vector<signed char>& assigned, std::vector<char>& model) const {
    const std::size_t n = size();
    std::vector<char> ct, cf, lower;
    if (!propagate(assigned, ct, cf, lower)) return false;
    for (int c : constraints) {
      const IRule& r = rules[c];
      bool pos_hold = std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return lower[a] != 0; });
      bool neg_hold = std::all_of(r.neg.begin(), r.neg.end(), [&](int a) { return cf[a] != 0; });
      if (pos_hold && neg_hold) return false;
    }
    for (int x : naf_atoms) {
      if (ct[x] || cf[x]) continue;
      for (signed char value : {static_cast<signed char>(1), static_cast<signed char>(-1)}) {
        assigned[x] = value;
        if (search_model(assigned, model)) {
          assigned[x] = 0;
          return true;
        }
      }
      assigned[x] = 0;
      return false;
    }
    // Every naf atom is decided, so the reduct is fixed and `lower` is its
    // least model. Confirm the candidate directly.
    if (!is_stable(lower)) return false;
    for (std::size_t i = 0; i < n; ++i) {
      if ((assigned[i] > 0 && !lower[i]) || (assigned[i] < 0 && lower[i])) return false;
    }
    model = std::move(lower);
    return true;
  }

  bool is_stable(const std::vector<char>& m) const {
    auto reduct_lm = least_model([&](const IRule& r) {
      return std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return m[a] != 0; });
    });
    if (reduct_lm != m) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (m[i] && complement[i] >= 0 && m[complement[i]]) return false;
    }
    for (int c : constraints) {
      const IRule& r = rules[c];
      if (std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return m[a] != 0; }) &&
          std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return m[a] != 0; })) {
        return false;
      }
    }
    return true;
  }
};

namespace {

using Cont = std::function<bool()>;

// Search state of a single query. Continuations return true to stop the
// enumeration.
class Search {
 public:
  Search(const Solver::Index& index, const SolveOptions& options)
      : ix_(index), options_(options), status_(index.size(), 0) {}

  bool prove_goals(const std::vector<std::pair<int, bool>>& goals, std::size_t i, const Cont& k) {
    if (i == goals.size()) return k();
    auto [atom, naf] = goals[i];
    Cont rest = [&, i] { return prove_goals(goals, i + 1, k); };
    return naf ? prove_neg(atom, rest) : prove_pos(atom, rest);
  }

  std::vector<int> with_status(signed char s) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < status_.size(); ++i) {
      if (status_[i] == s) out.push_back(static_cast<int>(i));
    }
    return out;
  }

 private:
  struct Ancestor {
    bool found = false;
    bool positive = false;
    int flips = 0;
  };

  void step() {
    if (++steps_ > options_.step_budget) throw ResourceLimit(options_.step_budget);
  }

  void set(int atom, signed char value) {
    status_[atom] = value;
    trail_.push_back(atom);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      status_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  // Nearest call of the same atom in the current call chain, with the number
  // of polarity changes between it and the new call.
  Ancestor ancestor(int atom, bool positive) const {
    Ancestor out;
    bool prev = positive;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (it->positive != prev) ++out.flips;
      prev = it->positive;
      if (it->atom == atom) {
        out.found = true;
        out.positive = it->positive;
        return out;
      }
    }
    return out;
  }

  // Records the goal's outcome, runs the continuation outside the goal's
  // frame and restores both afterwards.
  bool conclude(int atom, signed char value, const Cont& k) {
    Goal frame = stack_.back();
    stack_.pop_back();
    bool stop = false;
    if (status_[atom] != -value) {
      int comp = ix_.complement[atom];
      if (!(value > 0 && comp >= 0 && status_[comp] > 0)) {
        std::size_t mark = trail_.size();
        if (status_[atom] == 0) set(atom, value);
        stop = k();
        undo(mark);
      }
    }
    stack_.push_back(frame);
    return stop;
  }

  bool assume(int atom, signed char value, const Cont& k) {
    std::size_t mark = trail_.size();
    set(atom, value);
    bool stop = k();
    undo(mark);
    return stop;
  }

  bool prove_pos(int a, const Cont& k) {
    step();
    if (status_[a] > 0) return k();
    if (status_[a] < 0 || ix_.well_founded[a] < 0) return false;
    int comp = ix_.complement[a];
    if (comp >= 0 && status_[comp] > 0) return false;
    if (Ancestor anc = ancestor(a, true); anc.found) {
      // Even loop through negation: coinductive success. Positive loops and
      // calls under their own negation fail.
      if (anc.positive && anc.flips > 0) return assume(a, 1, k);
      return false;
    }
    for (int ri : ix_.by_head[a]) {
      const IRule& r = ix_.rules[ri];
      stack_.push_back({a, true});
      bool stop = prove_body(r, 0, [&] { return conclude(a, 1, k); });
      stack_.pop_back();
      if (stop) return true;
    }
    return false;
  }

  bool prove_body(const IRule& r, std::size_t i, const Cont& k) {
    if (i == r.body.size()) return k();
    auto [atom, naf] = r.body[i];
    Cont rest = [&, i] { return prove_body(r, i + 1, k); };
    return naf ? prove_neg(atom, rest) : prove_pos(atom, rest);
  }

  bool prove_neg(int a, const Cont& k) {
    step();
    if (status_[a] < 0) return k();
    if (status_[a] > 0 || ix_.well_founded[a] > 0) return false;
    if (Ancestor anc = ancestor(a, false); anc.found) {
      if (!anc.positive) return assume(a, -1, k);
      return false;
    }
    stack_.push_back({a, false});
    bool stop = falsify(ix_.by_head[a], 0, [&] { return conclude(a, -1, k); });
    stack_.pop_back();
    return stop;
  }

  // Dual of the rules for an atom: every rule needs one failing body element.
  bool falsify(const std::vector<int>& rules, std::size_t j, const Cont& k) {
    if (j == rules.size()) return k();
    const IRule& r = ix_.rules[rules[j]];
    Cont rest = [&, j] { return falsify(rules, j + 1, k); };
    for (auto [atom, naf] : r.body) {
      // Already falsified by the current hypothesis set: no need to branch.
      if ((naf && status_[atom] > 0) || (!naf && status_[atom] < 0)) return rest();
    }
    for (auto [atom, naf] : r.body) {
      bool stop = naf ? prove_pos(atom, rest) : prove_neg(atom, rest);
      if (stop) return true;
    }
    return false;
  }

  const Solver::Index& ix_;
  const SolveOptions& options_;
  std::vector<signed char> status_;
  std::vector<int> trail_;
  std::vector<Goal> stack_;
  std::size_t steps_ = 0;
};

bool unify(const Atom& pattern, const Atom& ground, Binding& b) {
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& t = pattern.args[i];
    if (t.is_variable()) {
      auto it = b.find(t.name);
      if (it == b.end()) {
        b.emplace(t.name, ground.args[i]);
      } else if (!(it->second == ground.args[i])) {
        return false;
      }
    } else if (!(t == ground.args[i])) {
      return false;
    }
  }
  return true;
}

Term resolve(const Term& t, const Binding& b) {
  if (!t.is_variable()) return t;
  auto it = b.find(t.name);
  if (it == b.end()) throw Error("unbound variable " + t.name + " in query comparison");
  return it->second;
}

}  // namespace

bool StableModel::contains(const Literal& l) const {
  return std::binary_search(atoms.begin(), atoms.end(), l);
}

bool compatible(const PartialAnswerSet& answer, const StableModel& m) {
  return std::all_of(answer.positive.begin(), answer.positive.end(),
                     [&](const Literal& l) { return m.contains(l); }) &&
         std::none_of(answer.nafs.begin(), answer.nafs.end(),
                      [&](const Literal& l) { return m.contains(l); });
}

Solver::Solver(const GroundProgram& g, SolveOptions options)
    : index_(std::make_unique<Index>(g)), options_(options) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

const GroundProgram& Solver::program() const { return index_->program; }

std::optional<bool> Solver::well_founded(const Literal& l) const {
  auto it = index_->ids.find(l);
  if (it == index_->ids.end()) return false;
  signed char v = index_->well_founded[it->second];
  if (v == 0) return std::nullopt;
  return v > 0;
}

std::optional<StableModel> Solver::find_model(const std::vector<Literal>& must_hold,
                                              const std::vector<Literal>& must_fail) const {
  std::vector<signed char> assigned(index_->size(), 0);
  for (const auto& l : must_hold) {
    auto it = index_->ids.find(l);
    if (it == index_->ids.end()) return std::nullopt;  // can never be derived
    if (assigned[it->second] < 0) return std::nullopt;
    assigned[it->second] = 1;
  }
  for (const auto& l : must_fail) {
    auto it = index_->ids.find(l);
    if (it == index_->ids.end()) continue;
    if (assigned[it->second] > 0) return std::nullopt;
    assigned[it->second] = -1;
  }
  std::vector<char> model;
  if (!index_->search_model(assigned, model)) return std::nullopt;
  StableModel out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model[i]) out.atoms.push_back(index_->program.atom_universe[i]);
  }
  return out;
}

void Solver::for_each_answer(const Query& q, const Visitor& visit) const {
  const Index& ix = *index_;
  const auto& universe = ix.program.atom_universe;
  Search search(ix, options_);
  std::set<std::string> emitted;
  std::unordered_map<std::string, bool> checked;
  Next pending = Next::Continue;

  auto run_ground = [&](const Binding& binding, const std::vector<std::pair<int, bool>>& goals) {
    return search.prove_goals(goals, 0, [&] {
      std::vector<int> pos = search.with_status(1);
      std::vector<int> neg = search.with_status(-1);
      std::string key;
      for (int a : pos) key += std::to_string(a) + ",";
      key += "|";
      for (int a : neg) key += std::to_string(a) + ",";
      auto [it, fresh] = checked.try_emplace(key, false);
      if (fresh) {
        std::vector<signed char> assigned(ix.size(), 0);
        for (int a : pos) assigned[a] = 1;
        for (int a : neg) assigned[a] = -1;
        std::vector<char> model;
        it->second = ix.search_model(assigned, model);
      }
      if (!it->second) return false;
      PartialAnswerSet answer;
      answer.bindings = binding;
      for (int a : pos) answer.positive.push_back(universe[a]);
      for (int a : neg) answer.nafs.push_back(universe[a]);
      std::string full = key + "#";
      for (const auto& [v, t] : binding) full += v + "=" + to_string(t) + ";";
      if (!emitted.insert(full).second) return false;
      pending = visit(answer);
      return pending != Next::Continue;
    });
  };

  // Resolves query variables against the universe, leftmost goal first.
  std::function<bool(std::size_t, Binding&)> bind = [&](std::size_t i, Binding& b) -> bool {
    if (i == q.goals.size()) {
      std::vector<std::pair<int, bool>> goals;
      for (const auto& g : q.goals) {
        if (g.kind == BodyElement::Kind::Builtin) continue;
        Literal l = apply_binding(g.literal, b);
        auto it = ix.ids.find(l);
        bool naf = g.kind == BodyElement::Kind::Naf;
        if (it == ix.ids.end()) {
          if (naf) continue;  // unknown atoms are unprovable
          return false;
        }
        goals.emplace_back(it->second, naf);
      }
      Binding shown;
      for (const auto& v : variables_of(q.goals)) shown[v] = b.at(v);
      bool stop = run_ground(shown, goals);
      if (pending == Next::NextBinding) {
        pending = Next::Continue;
        return false;
      }
      return stop;
    }
    const BodyElement& g = q.goals[i];
    if (g.kind == BodyElement::Kind::Builtin) {
      Term lhs = resolve(g.builtin.lhs, b);
      Term rhs = resolve(g.builtin.rhs, b);
      if (!lhs.is_number() || !rhs.is_number()) return false;
      if (!evaluate(g.builtin.op, lhs.number, rhs.number)) return false;
      return bind(i + 1, b);
    }
    Literal l = apply_binding(g.literal, b);
    if (l.atom.is_ground()) return bind(i + 1, b);
    if (g.kind == BodyElement::Kind::Naf) {
      throw Error("unsafe query: variables under 'not' must occur in a positive goal first");
    }
    auto lo = std::lower_bound(universe.begin(), universe.end(),
                               Literal{Atom{l.atom.predicate, {}}, false});
    for (auto it = lo; it != universe.end() && it->atom.predicate == l.atom.predicate; ++it) {
      if (it->strong_neg != l.strong_neg || it->atom.arity() != l.atom.arity()) continue;
      Binding next = b;
      if (!unify(l.atom, it->atom, next)) continue;
      if (bind(i + 1, next)) return true;
    }
    return false;
  };

  Binding b;
  bind(0, b);
}

std::vector<PartialAnswerSet> Solver::solve(const Query& q, std::size_t limit) const {
  std::vector<PartialAnswerSet> out;
  if (limit == 0) return out;
  for_each_answer(q, [&](const PartialAnswerSet& a) {
    out.push_back(a);
    return out.size() >= limit ? Next::Stop : Next::Continue;
  });
  return out;
}

std::vector<PartialAnswerSet> solve(const GroundProgram& g, const Query& q, std::size_t limit,
                                    const SolveOptions& options) {
  return Solver(g, options).solve(q, limit);
}

}  // namespace chf
