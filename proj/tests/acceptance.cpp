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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <json.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "chf/abduction.hpp"
#include "chf/kb.hpp"
#include "chf/parser.hpp"
#include "cli.hpp"
#include "support/oracle_agreement.hpp"
#include "support/pattern_fixtures.hpp"
#include "support/patients.hpp"
#include "support/random_ast.hpp"
#include "support/random_programs.hpp"

using namespace chf;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(std::string why) {
    if (pass) detail = std::move(why);
    pass = false;
  }
};

const Program& shipped_kb() {
  static const Program p = kb::load_kb({CHF_KB_DIR});
  return p;
}

std::set<std::string> texts(const std::vector<Literal>& ls) {
  std::set<std::string> out;
  for (const auto& l : ls) out.insert(to_string(l));
  return out;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937 rng(20240601);
  testing::RandomProgramSpec spec;  // 12 atoms, 20 rules, naf 0.5, constraints 0.1
  for (int i = 0; i < 500 && o.pass; ++i) {
    if (auto why = testing::oracle_mismatch(testing::random_program(rng, spec)); !why.empty()) {
      o.fail("program " + std::to_string(i) + ": " + why);
    }
  }
  return o;
}

Outcome reference_recommendations() {
  Outcome o;
  std::ostringstream out, err;
  int code = cli::run({"recommend", "--kb", CHF_KB_DIR, "--patient",
                       std::string(CHF_SAMPLES_DIR) + "/stage_c_patient.json", "--format", "json-lines"},
                      out, err);
  if (code != 0) {
    o.fail("exit " + std::to_string(code) + ": " + err.str());
    return o;
  }
  std::optional<std::set<std::string>> sodium, ace;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) {
    json rec = json::parse(line);
    std::set<std::string> support;
    for (const auto& a : rec["positive"]) support.insert(a.get<std::string>());
    for (const auto& a : rec["nafs"]) support.insert("not " + a.get<std::string>());
    std::string t = rec["bindings"]["Treatment"], c = rec["bindings"]["Class"];
    if (t == "sodium_restriction" && c == "class_2a") sodium = support;
    if (t == "ace_inhibitors" && c == "class_1") ace = support;
  }
  const std::set<std::string> want_sodium = {"accf_stage(c)",
                                             "recommendation(sodium_restriction,class_2a)",
                                             "not contraindication(sodium_restriction)"};
  if (!sodium) o.fail("no sodium_restriction answer");
  else if (*sodium != want_sodium) o.fail("sodium_restriction support differs");
  if (!ace) {
    o.fail("no ace_inhibitors answer");
  } else {
    for (const char* need : {"recommendation(beta_blockers,class_1)",
                             "recommendation(diuretics,class_1)", "not history(angioedema,recent)",
                             "not history(angioedema,remote)", "not pregnancy"}) {
      if (!ace->contains(need)) o.fail(std::string("ace_inhibitors support lacks ") + need);
    }
  }
  return o;
}

Outcome hydralazine_abduction() {
  Outcome o;
  Program p = shipped_kb();
  p.append(parse_program(testing::read_text(std::string(CHF_SAMPLES_DIR) + "/hydralazine_candidate_facts.lp")));
  p.add_abducible({"history", 1});
  p.add_abducible({"contraindication", 1});
  auto results =
      abduce(p, parse_query("recommendation(hydralazine_and_isosorbide_dinitrate, class_1)."), 10);
  bool found = std::any_of(results.begin(), results.end(), [](const AbductiveResult& r) {
    auto pos = texts(r.answer.positive);
    auto nafs = texts(r.answer.nafs);
    return pos.contains("history(standard_neurohormonal_antagonist_therapy)") &&
           pos.contains("nyha_class_3_to_4") &&
           nafs.contains("contraindication(hydralazine_and_isosorbide_dinitrate)");
  });
  if (!found) o.fail(std::to_string(results.size()) + " results, none with the expected literals");
  return o;
}

Outcome cascade() {
  Outcome o;
  auto facts = [](const std::string& src) { return parse_program(src).rules; };
  auto mentions_bb = [](const kb::Recommendation& r) {
    return texts(r.support.positive).contains("recommendation(beta_blockers,class_1)");
  };
  const std::string base = "accf_stage(c). hf_with_reduced_ef.";

  auto plain = kb::recommend(facts(base), shipped_kb(), 50);
  if (std::none_of(plain.begin(), plain.end(), [](const kb::Recommendation& r) {
        return r.treatment == "beta_blockers";
      })) {
    o.fail("beta blockers not recommended for stage C HFrEF");
  }
  auto fluid = kb::recommend(facts(base + " evidence(fluid_retention)."), shipped_kb(), 50);
  if (std::none_of(fluid.begin(), fluid.end(), mentions_bb)) o.fail("fluid retention: no beta blockers");
  for (const auto& r : fluid) {
    if (mentions_bb(r) &&
        !texts(r.support.positive).contains("recommendation(diuretics,class_1)")) {
      o.fail("beta blockers without diuretics in the " + r.treatment + " support");
    }
  }
  // Every answer, not only the first per treatment.
  Program p = shipped_kb();
  p.append(parse_program(base + " evidence(fluid_retention). contraindication(diuretics)."));
  Solver solver(ground_program(p));
  std::size_t answers = 0;
  solver.for_each_answer(parse_query("recommendation(T, C)."), [&](const PartialAnswerSet& a) {
    ++answers;
    for (const auto& l : a.positive) {
      if (l.atom.predicate == "recommendation" && to_string(l.atom.args[0]) == "beta_blockers") {
        o.fail("beta blockers recommended although diuretics are contraindicated");
      }
    }
    return Solver::Next::Continue;
  });
  if (answers == 0) o.fail("no answers at all with diuretics contraindicated");
  return o;
}

Outcome pattern_suite() {
  Outcome o;
  for (const auto* c : testing::golden_cases()) {
    if (auto why = testing::golden_mismatch(*c); !why.empty()) o.fail(why);
  }
  for (const auto& c : testing::behaviour_cases()) {
    if (!testing::check_behaviour(c)) o.fail("behaviour: " + c.name);
  }
  return o;
}

Outcome incompatible_triple() {
  Outcome o;
  std::mt19937 rng(7);
  const std::set<std::string> triple = {"recommendation(ace_inhibitors,class_1)",
                                        "recommendation(arbs,class_1)",
                                        "recommendation(aldosterone_antagonist,class_1)"};
  for (int i = 0; i < 200 && o.pass; ++i) {
    Program p = shipped_kb();
    for (auto& f : kb::patient_to_facts(testing::random_record(rng))) p.rules.push_back(f);
    Solver solver(ground_program(p));
    std::size_t seen = 0;
    solver.for_each_answer(parse_query("recommendation(T, C)."), [&](const PartialAnswerSet& a) {
      auto pos = texts(a.positive);
      if (std::all_of(triple.begin(), triple.end(), [&](const std::string& s) { return pos.contains(s); })) {
        o.fail("record " + std::to_string(i) + " has all three");
      }
      return ++seen >= 200 ? Solver::Next::Stop : Solver::Next::Continue;
    });
  }
  return o;
}

Outcome ablations() {
  Outcome o;
  kb::PatientRecord reference = testing::reference_record();
  for (unsigned mask = 0; mask < 1024; ++mask) {
    try {
      kb::recommend(testing::ablate(reference, mask), shipped_kb(), 10);
    } catch (const std::exception& e) {
      o.fail("mask " + std::to_string(mask) + ": " + e.what());
    }
  }
  return o;
}

Outcome round_trip() {
  Outcome o;
  for (const auto& path : kb::default_kb_paths(CHF_KB_DIR)) {
    Program p = parse_program(testing::read_text(path.string()));
    if (parse_program(print_program(p)) != p) o.fail(path.filename().string());
  }
  std::mt19937 rng(1234);
  testing::AstGenerator gen(rng);
  for (int i = 0; i < 1000; ++i) {
    Program p = gen.program();
    std::string text = print_program(p);
    if (parse_program(text) != p) o.fail("random AST " + std::to_string(i) + ":\n" + text);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_seconds;  // 0: no limit
  };
  const std::vector<Criterion> criteria = {
      {"oracle equivalence (500 random programs)", oracle_equivalence, 60},
      {"reference patient recommendations via CLI", reference_recommendations, 5},
      {"hydralazine what-if abduction", hydralazine_abduction, 5},
      {"fluid retention cascade", cascade, 0},
      {"pattern golden and behaviour suite", pattern_suite, 0},
      {"incompatible triple over 200 fuzzed records", incompatible_triple, 0},
      {"1024 reference record field ablations", ablations, 120},
      {"parser round trip (KB files and 1000 ASTs)", round_trip, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      o.fail("took " + std::to_string(seconds) + " s");
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " (" << timing << ")";
    if (!o.pass) std::cout << ": " << o.detail;
    std::cout << "\n";
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
