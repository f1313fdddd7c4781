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

// Reference listings for the seven templates and small behavioural
// scenarios. Shared by the unit tests and the acceptance binary, so nothing
// here depends on a test framework.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "chf/grounder.hpp"
#include "chf/parser.hpp"
#include "chf/patterns.hpp"
#include "chf/solver.hpp"

namespace chf::testing {

struct GoldenCase {
  std::string declarations;
  std::string listing;
  bool exact;  // otherwise the listing must be contained in the expansion
};

inline const GoldenCase kGoldenAggressive{
    R"(#pattern aggressive(choice(digoxin, class_2a), pre([accf_stage(c), hf_with_reduced_ef]),
                           dangers([evidence(atrioventricular_block)])).)",
    R"(recommendation(digoxin, class_2a) :- not contraindication(digoxin),
           accf_stage(c), hf_with_reduced_ef.
       contraindication(digoxin) :- evidence(atrioventricular_block).)",
    true};

inline const GoldenCase kGoldenConservative{
    R"(#pattern conservative(choice(blood_pressure_control, class_1),
           pre([accf_stage(b), diagnosis(structural_cardiac_abnormalities)]),
           dangers([history(mi), history(acs)])).)",
    R"(recommendation(blood_pressure_control, class_1) :-
           accf_stage(b), diagnosis(structural_cardiac_abnormalities),
           not contraindication(blood_pressure_control).
       contraindication(blood_pressure_control) :- not -history(mi).
       contraindication(blood_pressure_control) :- not -history(acs).)",
    true};

inline const GoldenCase kGoldenAnti{
    R"(#pattern anti(choice(anticoagulation), dangers([[not cardioembolic_source,
           not diagnosis(af), not history(thromboembolism), hf_with_reduced_ef]])).)",
    R"(contraindication(anticoagulation) :- not cardioembolic_source,
           not diagnosis(af), not history(thromboembolism), hf_with_reduced_ef.)",
    true};

inline const GoldenCase kGoldenPreference{
    R"(#pattern prefer(first(ace_inhibitors, class_1), second(arbs, class_1),
           pre([accf_stage(c), hf_with_reduced_ef])).)",
    R"(recommendation(ace_inhibitors, class_1) :- not contraindication(ace_inhibitors),
           accf_stage(c), hf_with_reduced_ef.
       recommendation(arbs, class_1) :- contraindication(ace_inhibitors),
           not contraindication(arbs), not taboo_choice(arbs),
           accf_stage(c), hf_with_reduced_ef.)",
    true};

inline const GoldenCase kGoldenConcomitant{
    R"(#pattern concomitant(trigger(ace_inhibitors, class_1), with(diuretics, class_1),
           pre([accf_stage(c), hf_with_reduced_ef]), when([hf_with_reduced_ef])).)",
    R"(recommendation(ace_inhibitors, class_1) :- accf_stage(c),
           not skip_concomitant_choice(ace_inhibitors),
           not contraindication(ace_inhibitors), hf_with_reduced_ef.
       skip_concomitant_choice(ace_inhibitors) :-
           hf_with_reduced_ef, not recommendation(diuretics, class_1),
           not contraindication(diuretics).
       recommendation(diuretics, class_1) :-
           hf_with_reduced_ef, not contraindication(diuretics),
           recommendation(ace_inhibitors, class_1).)",
    true};

inline const GoldenCase kGoldenIndispensable{
    R"(#pattern concomitant(trigger(beta_blockers, class_1), with(diuretics, class_1),
           pre([accf_stage(c), hf_with_reduced_ef]), when([hf_with_reduced_ef])).
       #pattern indispensable(trigger(beta_blockers, class_1), needs(diuretics, class_1),
           pre([accf_stage(c), hf_with_reduced_ef]),
           when([hf_with_reduced_ef, accf_stage(c),
                 current_or_recent_history_of_fluid_retention])).)",
    R"(recommendation(beta_blockers, class_1) :-
           not skip_concomitant_choice(beta_blockers),
           not absent_indispensable_choice(beta_blockers),
           not contraindication(beta_blockers), accf_stage(c), hf_with_reduced_ef.
       absent_indispensable_choice(beta_blockers) :-
           not recommendation(diuretics, class_1), hf_with_reduced_ef,
           accf_stage(c), current_or_recent_history_of_fluid_retention.
       recommendation(diuretics, class_1) :-
           recommendation(beta_blockers, class_1),
           not contraindication(diuretics), accf_stage(c), hf_with_reduced_ef,
           current_or_recent_history_of_fluid_retention.)",
    false};

inline const GoldenCase kGoldenIncompatible{
    R"(#pattern incompatible([ace_inhibitors, arbs, aldosterone_antagonist], class_1,
           pre([hf_with_reduced_ef])).
       #pattern prefer(first(ace_inhibitors, class_1), second(arbs, class_1),
           pre([accf_stage(c), hf_with_reduced_ef])).
       #pattern concomitant(trigger(ace_inhibitors, class_1), with(diuretics, class_1),
           pre([accf_stage(c), hf_with_reduced_ef]), when([hf_with_reduced_ef])).
       #pattern concomitant(trigger(aldosterone_antagonist, class_1), with(diuretics, class_1),
           pre([conditions_for_aldosterone_antagonist_class_1]), when([hf_with_reduced_ef])).)",
    R"(taboo_choice(ace_inhibitors) :- hf_with_reduced_ef,
           recommendation(arbs, class_1),
           recommendation(aldosterone_antagonist, class_1).
       taboo_choice(arbs) :- hf_with_reduced_ef,
           recommendation(ace_inhibitors, class_1),
           recommendation(aldosterone_antagonist, class_1).
       taboo_choice(aldosterone_antagonist) :- hf_with_reduced_ef,
           recommendation(arbs, class_1), recommendation(ace_inhibitors, class_1).
       recommendation(ace_inhibitors, class_1) :- accf_stage(c),
           hf_with_reduced_ef, not skip_concomitant_choice(ace_inhibitors),
           not taboo_choice(ace_inhibitors), not contraindication(ace_inhibitors).
       recommendation(arbs, class_1) :- contraindication(ace_inhibitors),
           not contraindication(arbs), not taboo_choice(arbs),
           accf_stage(c), hf_with_reduced_ef.
       recommendation(aldosterone_antagonist, class_1) :-
           conditions_for_aldosterone_antagonist_class_1,
           not skip_concomitant_choice(aldosterone_antagonist),
           not contraindication(aldosterone_antagonist),
           not taboo_choice(aldosterone_antagonist).)",
    false};

inline const std::vector<const GoldenCase*>& golden_cases() {
  static const std::vector<const GoldenCase*> all{
      &kGoldenAggressive,  &kGoldenConservative,  &kGoldenAnti,        &kGoldenPreference,
      &kGoldenConcomitant, &kGoldenIndispensable, &kGoldenIncompatible};
  return all;
}

// Head plus sorted body: rule identity up to body order.
inline std::string canonical(const Rule& r) {
  std::vector<std::string> body;
  for (const auto& e : r.body) body.push_back(to_string(e));
  std::sort(body.begin(), body.end());
  std::string out = r.head ? to_string(*r.head) : "";
  out += " :-";
  for (const auto& b : body) out += " " + b + ";";
  return out;
}

// Empty when the expansion agrees with the listing, otherwise a description
// of the first disagreement.
inline std::string golden_mismatch(const GoldenCase& c) {
  std::vector<std::string> got, want;
  for (const auto& r : patterns::expand_program(parse_program(c.declarations)).rules) {
    got.push_back(canonical(r));
  }
  for (const auto& r : parse_program(c.listing).rules) want.push_back(canonical(r));
  for (const auto& w : want) {
    if (std::find(got.begin(), got.end(), w) == got.end()) return "missing rule: " + w;
  }
  if (c.exact) {
    for (const auto& g : got) {
      if (std::find(want.begin(), want.end(), g) == want.end()) return "unexpected rule: " + g;
    }
  }
  return {};
}

struct BehaviourCase {
  std::string name;
  std::string program;
  std::vector<std::string> in_every_model;
  std::vector<std::string> in_no_model;
  std::vector<std::string> in_some_model;
  // (a, b): every model containing a also contains b.
  std::vector<std::pair<std::string, std::string>> implies = {};
};

inline std::vector<BehaviourCase> behaviour_cases() {
  const std::string agg =
      "#pattern aggressive(choice(x, class_1), pre([cond]), dangers([danger])).\ncond.\n";
  const std::string cons =
      "#pattern conservative(choice(x, class_1), pre([cond]), dangers([risk1, risk2])).\n"
      "cond.\n";
  const std::string anti = "#pattern anti(choice(x), dangers([[not safe, risky]])).\nrisky.\n";
  const std::string pref =
      "#pattern prefer(first(f, class_1), second(s, class_2a), pre([cond])).\n"
      "contraindication(f) :- bad_f.\ncond.\n";
  const std::string conc =
      "#pattern concomitant(trigger(t, class_1), with(d, class_1), pre([cond])).\n"
      "contraindication(d) :- bad_d.\ncond.\n";
  const std::string ind =
      "#pattern indispensable(trigger(t, class_1), needs(i, class_1), pre([cond])).\n"
      "contraindication(i) :- bad_i.\ncond.\n";
  const std::string recx = "recommendation(x,class_1)";
  return {
      {"aggressive without danger", agg, {recx}, {"contraindication(x)"}},
      {"aggressive with danger", agg + "danger.", {"contraindication(x)"}, {recx}},
      {"conservative without evidence of safety", cons, {"contraindication(x)"}, {recx}},
      {"conservative with partial evidence", cons + "-risk1.", {}, {recx}},
      {"conservative with evidence of safety", cons + "-risk1. -risk2.", {recx}, {}},
      {"anti with danger", anti, {"contraindication(x)"}, {}},
      {"anti with exception", anti + "safe.", {}, {"contraindication(x)"}},
      {"preference, first available", pref, {"recommendation(f,class_1)"},
       {"recommendation(s,class_2a)"}},
      {"preference, first contraindicated", pref + "bad_f.", {"recommendation(s,class_2a)"},
       {"recommendation(f,class_1)"}},
      {"concomitant follows trigger", conc, {}, {}, {"recommendation(t,class_1)"},
       {{"recommendation(t,class_1)", "recommendation(d,class_1)"}}},
      {"concomitant contraindicated", conc + "bad_d.", {"recommendation(t,class_1)"},
       {"recommendation(d,class_1)"}},
      {"indispensable available", ind, {}, {}, {"recommendation(t,class_1)"},
       {{"recommendation(t,class_1)", "recommendation(i,class_1)"}}},
      {"indispensable missing revokes trigger", ind + "bad_i.", {},
       {"recommendation(t,class_1)", "recommendation(i,class_1)"}},
      {"revocation cascades through concomitants",
       ind + "bad_i.\n#pattern concomitant(trigger(t, class_1), with(d, class_1), pre([cond])).",
       {}, {"recommendation(t,class_1)", "recommendation(d,class_1)"}},
  };
}

// Expectations are checked against every stable model; the scenario must
// have at least one.
inline bool check_behaviour(const BehaviourCase& c) {
  auto models = enumerate_stable_models_bruteforce(ground_program(parse_program(c.program)));
  if (models.empty()) return false;
  auto holds = [](const StableModel& m, const std::string& text) {
    return m.contains(parse_query(text).goals.at(0).literal);
  };
  for (const auto& x : c.in_some_model) {
    if (std::none_of(models.begin(), models.end(),
                     [&](const StableModel& m) { return holds(m, x); })) {
      return false;
    }
  }
  for (const auto& m : models) {
    for (const auto& [a, b] : c.implies) {
      if (holds(m, a) && !holds(m, b)) return false;
    }
    for (const auto& x : c.in_every_model) {
      if (!holds(m, x)) return false;
    }
    for (const auto& x : c.in_no_model) {
      if (holds(m, x)) return false;
    }
  }
  return true;
}

}  // namespace chf::testing
