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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "chf/errors.hpp"
#include "chf/kb.hpp"
#include "chf/parser.hpp"
#include "chf/patterns.hpp"
#include "support/patients.hpp"

using namespace chf;
using namespace chf::testing;

namespace {

const Program& shipped_kb() {
  static const Program p = kb::load_kb({CHF_KB_DIR});
  return p;
}

std::vector<std::string> rendered(const std::vector<Rule>& rules) {
  std::vector<std::string> out;
  for (const auto& r : rules) out.push_back(to_string(r));
  return out;
}

std::vector<Rule> facts(std::string_view src) { return parse_program(src).rules; }

bool has(const std::vector<Literal>& set, std::string_view text) {
  return std::any_of(set.begin(), set.end(), [&](const Literal& l) { return to_string(l) == text; });
}

const kb::Recommendation* find(const std::vector<kb::Recommendation>& recs,
                               std::string_view treatment, std::string_view cls) {
  auto it = std::find_if(recs.begin(), recs.end(), [&](const kb::Recommendation& r) {
    return r.treatment == treatment && r.class_label == cls;
  });
  return it == recs.end() ? nullptr : &*it;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("reference record becomes its facts in field order") {
  std::vector<std::string> expected = {
      "accf_stage(c).",
      "nyha_class(3).",
      "expectation_of_survival(3).",
      "gender(female).",
      "age(78).",
      "hf_with_reduced_ef.",
      "measurement(creatinine,1.8).",
      "measurement(potassium,4.9).",
      "measurement(lvef,0.35).",
      "measurement(lbbb,180).",
      "measurement(sinus_rhythm).",
      "diagnosis(myocardial_ischemia).",
      "diagnosis(atrial_fibrillation).",
      "diagnosis(coronary_artery_disease).",
      "diagnosis(hypertension).",
      "evidence(sleep_apnea).",
      "evidence(fluid_retention).",
      "history(mi,recent).",
      "history(cardiovascular_hospitalization).",
      "post_mi(40).",
  };
  CHECK(rendered(kb::patient_to_facts(reference_record())) == expected);
}

TEST_CASE("sparse records") {
  CHECK(kb::patient_to_facts({}).empty());
  kb::PatientRecord r;
  r.lvef = Decimal(40, 2);
  CHECK(rendered(kb::patient_to_facts(r)) == std::vector<std::string>{"measurement(lvef,0.4)."});
  r = {};
  r.pregnancy = false;
  r.hf_with_reduced_ef = true;
  CHECK(rendered(kb::patient_to_facts(r)) ==
        std::vector<std::string>{"hf_with_reduced_ef.", "-pregnancy."});
}

TEST_CASE("symbols outside the vocabulary") {
  kb::PatientRecord r;
  r.diagnoses = {"unicorn_fever"};
  CHECK_THROWS_AS(kb::patient_to_facts(r), VocabularyError);
  r = {};
  r.gender = "Not A Symbol";
  CHECK_THROWS_AS(kb::patient_to_facts(r), VocabularyError);
}

TEST_CASE("patient documents") {
  std::string reference = read_text(std::string(CHF_SAMPLES_DIR) + "/stage_c_patient.json");
  CHECK(kb::check_patient_json(reference).empty());
  kb::PatientRecord r = kb::patient_from_json(reference);
  CHECK(kb::patient_from_json(kb::patient_to_json(r)) == r);
  CHECK(kb::patient_from_json("{}") == kb::PatientRecord{});

  try {
    kb::patient_from_json(R"({"lvef": 1.5})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "lvef");
  }
  auto issues = kb::check_patient_json(
      R"({"lvef": 1.5, "age": -1, "colour": "blue", "diagnoses": ["x"], "nyhaClass": "3"})");
  std::set<std::string> fields;
  for (const auto& i : issues) fields.insert(i.field);
  CHECK(fields == std::set<std::string>{"lvef", "age", "colour", "diagnoses", "nyhaClass"});
  CHECK(kb::check_patient_json("[1, 2").size() == 1);
  CHECK_THROWS_AS(kb::patient_from_json(R"({"histories": [{"condition": "mi", "recency": "soon"}]})"),
                  ValidationError);
}

TEST_CASE("stage A with NYHA class warns without rejecting") {
  kb::PatientRecord r;
  r.stage = "a";
  r.nyha_class = 2;
  CHECK_NOTHROW(kb::validate(r));
  CHECK(kb::validation_warnings(r).size() == 1);
}

TEST_CASE("shipped knowledge base loads") {
  const Program& p = shipped_kb();
  CHECK(p.rules.size() >= 30);
  CHECK(p.patterns.empty());
  CHECK(kb::load_kb({}) == Program{});
  auto files = kb::default_kb_paths(CHF_KB_DIR);
  CHECK(kb::load_kb(files).rules.size() == p.rules.size());
}

TEST_CASE("load errors carry the file") {
  auto bad = temp_file("chf_bad_kind.lp", "a.\n#pattern bogus(choice(x, class_1)).\n");
  try {
    kb::load_kb({bad});
    FAIL("expected MalformedPattern");
  } catch (const MalformedPattern& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("chf_bad_kind.lp") != std::string::npos);
  }
  auto syntax = temp_file("chf_bad_syntax.lp", "p :- .\n");
  try {
    kb::load_kb({syntax});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("chf_bad_syntax.lp") != std::string::npos);
  }
  CHECK_THROWS_AS(kb::load_kb({"/nonexistent/kb.lp"}), Error);
}

TEST_CASE("shipped files round-trip through the printer") {
  for (const auto& path : kb::default_kb_paths(CHF_KB_DIR)) {
    INFO(path.string());
    Program p = parse_program(read_text(path.string()));
    CHECK(parse_program(print_program(p)) == p);
  }
}

TEST_CASE("vocabulary covers the knowledge base") {
  const kb::Vocabulary& v = kb::vocabulary();
  std::set<Signature> fact(v.fact_predicates.begin(), v.fact_predicates.end());
  std::set<Signature> derived(v.derived_predicates.begin(), v.derived_predicates.end());
  for (const auto& s : fact) CHECK_FALSE(derived.contains(s));
  auto known = [&](const Literal& l) {
    Signature s{l.atom.predicate, l.atom.arity()};
    return fact.contains(s) || derived.contains(s);
  };
  for (const auto& r : shipped_kb().rules) {
    INFO(to_string(r));
    if (r.head) CHECK(known(*r.head));
    for (const auto& e : r.body) {
      if (e.kind != BodyElement::Kind::Builtin) CHECK(known(e.literal));
    }
    if (r.head && r.head->atom.predicate == "recommendation") {
      CHECK(v.is_treatment(r.head->atom.args[0].name));
      CHECK(v.is_class_label(r.head->atom.args[1].name));
    }
  }
  CHECK(v.treatments.size() == 25);
  CHECK(v.diseases.size() == 25);
}

TEST_CASE("reference patient recommendations") {
  auto recs = kb::recommend(reference_record(), shipped_kb(), 10);
  const auto* sodium = find(recs, "sodium_restriction", "class_2a");
  REQUIRE(sodium);
  CHECK(sodium->support.positive.size() == 2);
  CHECK(has(sodium->support.positive, "accf_stage(c)"));
  CHECK(has(sodium->support.positive, "recommendation(sodium_restriction,class_2a)"));
  CHECK(sodium->support.nafs.size() == 1);
  CHECK(has(sodium->support.nafs, "contraindication(sodium_restriction)"));

  const auto* ace = find(recs, "ace_inhibitors", "class_1");
  REQUIRE(ace);
  for (auto text : {"accf_stage(c)", "hf_with_reduced_ef", "recommendation(ace_inhibitors,class_1)",
                    "recommendation(beta_blockers,class_1)", "recommendation(diuretics,class_1)"}) {
    CHECK(has(ace->support.positive, text));
  }
  for (auto text : {"contraindication(ace_inhibitors)", "contraindication(beta_blockers)",
                    "contraindication(diuretics)", "history(angioedema)",
                    "history(angioedema,recent)", "history(angioedema,remote)", "pregnancy"}) {
    CHECK(has(ace->support.nafs, text));
  }
}

TEST_CASE("fluid retention couples beta blockers to diuretics") {
  const std::string base = "accf_stage(c). hf_with_reduced_ef.";
  auto plain = kb::recommend(facts(base), shipped_kb(), 50);
  CHECK(find(plain, "beta_blockers", "class_1"));

  auto fluid = kb::recommend(facts(base + " evidence(fluid_retention)."), shipped_kb(), 50);
  REQUIRE(find(fluid, "beta_blockers", "class_1"));
  for (const auto& r : fluid) {
    if (has(r.support.positive, "recommendation(beta_blockers,class_1)")) {
      CHECK(has(r.support.positive, "recommendation(diuretics,class_1)"));
    }
  }

  auto blocked = kb::recommend(
      facts(base + " evidence(fluid_retention). contraindication(diuretics)."), shipped_kb(), 50);
  CHECK_FALSE(blocked.empty());
  for (const auto& r : blocked) {
    CHECK(r.treatment != "beta_blockers");
    CHECK(std::none_of(r.support.positive.begin(), r.support.positive.end(), [](const Literal& l) {
      return l.atom.predicate == "recommendation" && to_string(l.atom.args[0]) == "beta_blockers";
    }));
  }
}

TEST_CASE("stage C alone") {
  auto recs = kb::recommend(facts("accf_stage(c)."), shipped_kb(), 10);
  CHECK(find(recs, "sodium_restriction", "class_2a"));
}

TEST_CASE("empty patient") {
  CHECK(kb::recommend(kb::PatientRecord{}, shipped_kb(), 10).empty());
}

TEST_CASE("limit counts distinct recommendations") {
  auto all = kb::recommend(reference_record(), shipped_kb(), 100);
  CHECK(all.size() > 2);
  auto two = kb::recommend(reference_record(), shipped_kb(), 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == all[0]);
  CHECK(two[1] == all[1]);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& r : all) keys.insert({r.treatment, r.class_label});
  CHECK(keys.size() == all.size());
}

TEST_CASE("supports extend to stable models and exclude contraindicated choices") {
  std::mt19937 rng(5);
  for (int i = 0; i < 40; ++i) {
    kb::PatientRecord r = random_record(rng);
    Program p = shipped_kb();
    for (auto& f : kb::patient_to_facts(r)) p.rules.push_back(f);
    GroundProgram g = ground_program(p);
    Solver solver(g);
    for (const auto& rec : kb::recommend(r, shipped_kb(), 30)) {
      CHECK(has(rec.support.positive, "recommendation(" + rec.treatment + "," + rec.class_label + ")"));
      for (const auto& l : rec.support.positive) {
        if (l.atom.predicate != "recommendation") continue;
        std::string t = to_string(l.atom.args[0]);
        CHECK_FALSE(has(rec.support.positive, "contraindication(" + t + ")"));
      }
      auto model = solver.find_model(rec.support.positive, rec.support.nafs);
      REQUIRE(model);
      CHECK(check_stable(g, model->atoms));
    }
  }
}

TEST_CASE("field ablations of the reference record never fail") {
  kb::PatientRecord reference = reference_record();
  for (unsigned mask = 0; mask < 1024; mask += 37) {
    CHECK_NOTHROW(kb::recommend(ablate(reference, mask), shipped_kb(), 10));
  }
}
