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

#include "chf/kb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chf/errors.hpp"
#include "chf/grounder.hpp"
#include "chf/parser.hpp"
#include "chf/patterns.hpp"

namespace chf::kb {

namespace {

using nlohmann::json;

const std::vector<std::string> kPharmaceutical = {
    "ace_inhibitors", "arbs",      "beta_blockers",  "statin",
    "diuretics",      "aldosterone_antagonist",      "hydralazine_and_isosorbide_dinitrate",
    "digoxin",        "anticoagulation", "omega_3_fatty_acids", "inotropes"};

const std::vector<std::string> kObjectives = {
    "systolic_blood_pressure_control", "diastolic_blood_pressure_control",
    "obesity_control",                 "diabetes_control",
    "tobacco_avoidance",               "cardiotoxic_agents_avoidance",
    "atrial_fibrillation_control",     "water_restriction",
    "sodium_restriction",              "blood_pressure_control"};

const std::vector<std::string> kDevices = {
    "implantable_cardioverter_defibrillator", "cardiac_resynchronization_therapy",
    "mechanical_circulatory_support", "coronary_revascularization"};

const std::vector<std::string> kDiseases = {
    "sleep_apnea",
    "acute_coronary_syndrome",
    "myocardial_infarction",
    "obesity",
    "diabetes",
    "stroke",
    "fluid_retention",
    "angioedema",
    "ischemic_attack",
    "thromboembolism",
    "elevated_plasma_natriuretic_peptide_level",
    "asymptomatic_ischemic_cardiomyopathy",
    "lipid_disorders",
    "hypertension",
    "atrial_fibrillation",
    "myocardial_ischemia",
    "coronary_artery_disease",
    "dilated_cardiomyopathy",
    "acute_profound_hemodynamic_compromise",
    "threatened_end_organ_dysfunction",
    "ischemic_heart_disease",
    "angina",
    "structural_cardiac_abnormalities",
    "atrioventricular_block",
    "volume_overload"};

const std::vector<std::string> kFlags = {
    "cardioembolic_source",
    "significant_ventricular_pacing_eligibility",
    "mechanical_circulatory_support_eligibility",
    "continuous_parenteral_inotropic_dependence",
    "ischemic_etiology_of_hf",
    "ventricular_pacing_requirement"};

Vocabulary build_vocabulary() {
  Vocabulary v;
  v.fact_predicates = {{"accf_stage", 1}, {"nyha_class", 1},  {"gender", 1},
                       {"age", 1},        {"race", 1},        {"expectation_of_survival", 1},
                       {"measurement", 1}, {"measurement", 2}, {"diagnosis", 1},
                       {"evidence", 1},   {"history", 1},     {"history", 2},
                       {"post_mi", 1},    {"hf_with_reduced_ef", 0}, {"pregnancy", 0}};
  for (const auto& f : kFlags) v.fact_predicates.push_back({f, 0});
  v.derived_predicates = {{"recommendation", 2},
                          {"contraindication", 1},
                          {"taboo_choice", 1},
                          {"skip_concomitant_choice", 1},
                          {"absent_indispensable_choice", 1},
                          {"reduced_ef", 1},
                          {"history_of_mi_or_acs", 0},
                          {"nyha_class_3_to_4", 0},
                          {"current_or_recent_history_of_fluid_retention", 0},
                          {"post_acute_mi", 0},
                          {"hf_symptoms_or_diabetes", 0}};
  v.class_labels = {"class_1", "class_2a", "class_2b"};
  for (const auto* group : {&kPharmaceutical, &kObjectives, &kDevices}) {
    v.treatments.insert(v.treatments.end(), group->begin(), group->end());
  }
  v.diseases = kDiseases;
  v.history_conditions = kDiseases;
  for (const char* extra : {"mi", "acs", "cardiovascular_hospitalization",
                            "standard_neurohormonal_antagonist_therapy"}) {
    v.history_conditions.push_back(extra);
  }
  v.recencies = {"recent", "remote", "unspecified"};
  v.stages = {"a", "b", "c", "d"};
  v.flags = kFlags;
  return v;
}

bool contains(const std::vector<std::string>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_symbol(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z' || s == "not") return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
  });
}

Term sym(std::string_view s) { return Term::constant(std::string(s)); }
Term num(const Decimal& d) { return Term::num(d); }

Rule fact(std::string predicate, std::vector<Term> args = {}, bool negated = false) {
  Rule r;
  r.head = Literal{Atom{std::move(predicate), std::move(args)}, negated};
  return r;
}

std::optional<Decimal> decimal_of(const json& j) {
  if (j.is_number_integer()) return Decimal::from_int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Decimal::from_int(static_cast<std::int64_t>(j.get<std::uint64_t>()));
  if (!j.is_number_float()) return std::nullopt;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>(), std::chars_format::fixed);
  if (res.ec != std::errc()) return std::nullopt;
  return Decimal::parse(std::string_view(buf, res.ptr - buf));
}

json decimal_json(const Decimal& d) {
  if (d.scale() == 0) return json(d.mantissa());
  return json(d.to_double());
}

// Field table used for parsing, serialization and the vocabulary listing.
enum class Kind { Symbol, Number, Enum, Boolean, MultiSelect, HistoryList };

struct FieldSpec {
  const char* name;
  const char* section;
  Kind kind;
  const char* unit;
};

const std::vector<FieldSpec>& field_specs() {
  static const std::vector<FieldSpec> specs = {
      {"gender", "Demographics", Kind::Symbol, ""},
      {"age", "Demographics", Kind::Number, "years"},
      {"race", "Demographics", Kind::Symbol, ""},
      {"stage", "Measurements", Kind::Enum, ""},
      {"nyhaClass", "Measurements", Kind::Enum, ""},
      {"creatinine", "Measurements", Kind::Number, "mg/dL"},
      {"potassium", "Measurements", Kind::Number, "mEq/L"},
      {"lvef", "Measurements", Kind::Number, "fraction"},
      {"qrsDuration", "Measurements", Kind::Number, "ms"},
      {"lbbb", "Measurements", Kind::Number, "ms"},
      {"sinusRhythm", "Measurements", Kind::Boolean, ""},
      {"weight", "Measurements", Kind::Number, "kg"},
      {"diagnoses", "Diseases and Symptoms", Kind::MultiSelect, ""},
      {"evidences", "Diseases and Symptoms", Kind::MultiSelect, ""},
      {"histories", "Diseases and Symptoms", Kind::HistoryList, ""},
      {"expectationOfSurvival", "Miscellany", Kind::Number, "years"},
      {"postMiDays", "Miscellany", Kind::Number, "days"},
      {"hfWithReducedEf", "Miscellany", Kind::Boolean, ""},
      {"pregnancy", "Miscellany", Kind::Boolean, ""},
      {"flags", "Miscellany", Kind::MultiSelect, ""},
  };
  return specs;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Symbol: return "symbol";
    case Kind::Number: return "number";
    case Kind::Enum: return "enum";
    case Kind::Boolean: return "boolean";
    case Kind::MultiSelect: return "multi-select";
    case Kind::HistoryList: return "history-list";
  }
  return "";
}

// Parses a document into a record, collecting issues instead of throwing.
PatientRecord read_record(const json& doc, std::vector<FieldIssue>& issues) {
  PatientRecord r;
  if (!doc.is_object()) {
    issues.push_back({"", "patient document must be a JSON object"});
    return r;
  }
  const auto& names = patient_fields();
  for (const auto& [key, value] : doc.items()) {
    if (!contains(names, key)) issues.push_back({key, "unknown field"});
  }
  auto issue = [&](const std::string& field, const std::string& msg) {
    issues.push_back({field, msg});
  };
  auto get = [&](const char* key) -> const json* {
    auto it = doc.find(key);
    return it == doc.end() || it->is_null() ? nullptr : &*it;
  };
  auto symbol = [&](const char* key, std::optional<std::string>& out) {
    if (const json* j = get(key)) {
      if (!j->is_string() || !is_symbol(j->get<std::string>())) {
        issue(key, "expected a lowercase symbol");
      } else {
        out = j->get<std::string>();
      }
    }
  };
  auto number = [&](const char* key, std::optional<Decimal>& out) {
    if (const json* j = get(key)) {
      out = decimal_of(*j);
      if (!out) issue(key, "expected a number");
    }
  };
  auto boolean = [&](const char* key, std::optional<bool>& out) {
    if (const json* j = get(key)) {
      if (j->is_boolean()) {
        out = j->get<bool>();
      } else {
        issue(key, "expected true or false");
      }
    }
  };
  auto symbols = [&](const char* key, std::vector<std::string>& out,
                     const std::vector<std::string>& allowed) {
    const json* j = get(key);
    if (!j) return;
    if (!j->is_array()) {
      issue(key, "expected a list of symbols");
      return;
    }
    for (const auto& item : *j) {
      if (!item.is_string()) {
        issue(key, "expected a list of symbols");
      } else if (!contains(allowed, item.get<std::string>())) {
        issue(key, "unknown symbol '" + item.get<std::string>() + "'");
      } else {
        out.push_back(item.get<std::string>());
      }
    }
  };

  const Vocabulary& v = vocabulary();
  symbol("gender", r.gender);
  number("age", r.age);
  symbol("race", r.race);
  symbol("stage", r.stage);
  if (const json* j = get("nyhaClass")) {
    if (j->is_number_integer() || j->is_number_unsigned()) {
      r.nyha_class = j->get<int>();
    } else {
      issue("nyhaClass", "expected an integer");
    }
  }
  number("creatinine", r.creatinine);
  number("potassium", r.potassium);
  number("lvef", r.lvef);
  number("qrsDuration", r.qrs_duration);
  number("lbbb", r.lbbb);
  boolean("sinusRhythm", r.sinus_rhythm);
  number("weight", r.weight);
  symbols("diagnoses", r.diagnoses, v.diseases);
  symbols("evidences", r.evidences, v.diseases);
  if (const json* j = get("histories")) {
    if (!j->is_array()) issue("histories", "expected a list of {condition, recency}");
    for (const auto& item : j->is_array() ? *j : json::array()) {
      auto c = item.is_object() ? item.find("condition") : item.end();
      if (!item.is_object() || c == item.end() || !c->is_string()) {
        issue("histories", "each entry needs a condition");
        continue;
      }
      History h{c->get<std::string>()};
      if (auto rec = item.find("recency"); rec != item.end() && !rec->is_null()) {
        if (!rec->is_string()) {
          issue("histories", "recency must be a string");
          continue;
        }
        h.recency = rec->get<std::string>();
      }
      for (const auto& [key, value] : item.items()) {
        if (key != "condition" && key != "recency") issue("histories", "unknown key '" + key + "'");
      }
      if (!contains(v.history_conditions, h.condition)) {
        issue("histories", "unknown condition '" + h.condition + "'");
      } else if (!contains(v.recencies, h.recency)) {
        issue("histories", "unknown recency '" + h.recency + "'");
      } else {
        r.histories.push_back(std::move(h));
      }
    }
  }
  number("expectationOfSurvival", r.expectation_of_survival);
  number("postMiDays", r.post_mi_days);
  boolean("hfWithReducedEf", r.hf_with_reduced_ef);
  boolean("pregnancy", r.pregnancy);
  symbols("flags", r.flags, v.flags);
  return r;
}

// Range checks shared by validate() and check_patient_json().
std::vector<FieldIssue> range_issues(const PatientRecord& r) {
  std::vector<FieldIssue> out;
  const Decimal zero = Decimal::from_int(0);
  if (r.lvef && (*r.lvef < zero || *r.lvef > Decimal::from_int(1))) {
    out.push_back({"lvef", "must be between 0 and 1"});
  }
  if (r.age && *r.age < zero) out.push_back({"age", "must not be negative"});
  if (r.stage && !contains(vocabulary().stages, *r.stage)) {
    out.push_back({"stage", "must be one of a, b, c, d"});
  }
  if (r.nyha_class && (*r.nyha_class < 1 || *r.nyha_class > 4)) {
    out.push_back({"nyhaClass", "must be between 1 and 4"});
  }
  for (const auto& [field, value] :
       {std::pair{"creatinine", r.creatinine}, {"potassium", r.potassium},
        {"qrsDuration", r.qrs_duration}, {"lbbb", r.lbbb}, {"weight", r.weight},
        {"expectationOfSurvival", r.expectation_of_survival}, {"postMiDays", r.post_mi_days}}) {
    if (value && *value < zero) out.push_back({field, "must not be negative"});
  }
  for (const auto& h : r.histories) {
    if (!contains(vocabulary().recencies, h.recency)) {
      out.push_back({"histories", "unknown recency '" + h.recency + "'"});
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program parse_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  const std::string where = path.string() + ": ";
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw ParseError(where + e.message(), e.line(), e.column(), e.snippet());
  } catch (const MalformedPattern& e) {
    throw MalformedPattern(e.field(), where + e.what(), e.line());
  }
}

}  // namespace

bool Vocabulary::is_treatment(std::string_view s) const { return contains(treatments, s); }
bool Vocabulary::is_class_label(std::string_view s) const { return contains(class_labels, s); }

const Vocabulary& vocabulary() {
  static const Vocabulary v = build_vocabulary();
  return v;
}

std::string vocabulary_json() {
  const Vocabulary& v = vocabulary();
  auto sigs = [](const std::vector<Signature>& list) {
    json out = json::array();
    for (const auto& s : list) out.push_back({{"name", s.name}, {"arity", s.arity}});
    return out;
  };
  json fields = json::array();
  for (const auto& f : field_specs()) {
    json entry = {{"name", f.name}, {"section", f.section}, {"kind", kind_name(f.kind)}};
    if (*f.unit) entry["unit"] = f.unit;
    std::string name = f.name;
    if (name == "stage") entry["options"] = v.stages;
    if (name == "nyhaClass") entry["options"] = {1, 2, 3, 4};
    if (name == "diagnoses" || name == "evidences") entry["options"] = v.diseases;
    if (name == "flags") entry["options"] = v.flags;
    if (name == "histories") {
      entry["conditions"] = v.history_conditions;
      entry["recencies"] = v.recencies;
    }
    fields.push_back(std::move(entry));
  }
  json doc = {
      {"factPredicates", sigs(v.fact_predicates)},
      {"derivedPredicates", sigs(v.derived_predicates)},
      {"classLabels", v.class_labels},
      {"treatments", v.treatments},
      {"treatmentGroups",
       {{"pharmaceutical", kPharmaceutical},
        {"managementObjectives", kObjectives},
        {"deviceSurgery", kDevices}}},
      {"diseases", v.diseases},
      {"historyConditions", v.history_conditions},
      {"recencies", v.recencies},
      {"stages", v.stages},
      {"flags", v.flags},
      {"fields", fields},
  };
  return doc.dump();
}

const std::vector<std::string>& patient_fields() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : field_specs()) out.push_back(f.name);
    return out;
  }();
  return names;
}

std::vector<FieldIssue> check_patient_json(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) return {{"", "malformed JSON"}};
  std::vector<FieldIssue> issues;
  PatientRecord r = read_record(doc, issues);
  for (auto& i : range_issues(r)) {
    bool seen = std::any_of(issues.begin(), issues.end(), [&](const FieldIssue& x) {
      return x.field == i.field && x.message == i.message;
    });
    if (!seen) issues.push_back(std::move(i));
  }
  return issues;
}

PatientRecord patient_from_json(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("", "malformed JSON");
  std::vector<FieldIssue> issues;
  PatientRecord r = read_record(doc, issues);
  if (!issues.empty()) throw ValidationError(issues[0].field, issues[0].message);
  validate(r);
  return r;
}

std::string patient_to_json(const PatientRecord& r) {
  json doc = json::object();
  auto opt = [&](const char* key, const auto& value) {
    if (value) doc[key] = *value;
  };
  auto dec = [&](const char* key, const std::optional<Decimal>& value) {
    if (value) doc[key] = decimal_json(*value);
  };
  opt("gender", r.gender);
  dec("age", r.age);
  opt("race", r.race);
  opt("stage", r.stage);
  opt("nyhaClass", r.nyha_class);
  dec("creatinine", r.creatinine);
  dec("potassium", r.potassium);
  dec("lvef", r.lvef);
  dec("qrsDuration", r.qrs_duration);
  dec("lbbb", r.lbbb);
  opt("sinusRhythm", r.sinus_rhythm);
  dec("weight", r.weight);
  if (!r.diagnoses.empty()) doc["diagnoses"] = r.diagnoses;
  if (!r.evidences.empty()) doc["evidences"] = r.evidences;
  if (!r.histories.empty()) {
    json list = json::array();
    for (const auto& h : r.histories) list.push_back({{"condition", h.condition}, {"recency", h.recency}});
    doc["histories"] = list;
  }
  dec("expectationOfSurvival", r.expectation_of_survival);
  dec("postMiDays", r.post_mi_days);
  opt("hfWithReducedEf", r.hf_with_reduced_ef);
  opt("pregnancy", r.pregnancy);
  if (!r.flags.empty()) doc["flags"] = r.flags;
  return doc.dump();
}

void validate(const PatientRecord& r) {
  auto issues = range_issues(r);
  if (!issues.empty()) throw ValidationError(issues[0].field, issues[0].message);
}

std::vector<std::string> validation_warnings(const PatientRecord& r) {
  std::vector<std::string> out;
  if (r.stage == "a" && r.nyha_class) {
    out.push_back("nyhaClass: stage A patients have no NYHA class");
  }
  return out;
}

std::vector<Rule> patient_to_facts(const PatientRecord& r) {
  const Vocabulary& v = vocabulary();
  auto symbol = [](const char* field, const std::string& s) {
    if (!is_symbol(s)) throw VocabularyError(std::string(field) + ": '" + s + "' is not a symbol");
    return sym(s);
  };
  auto member = [](const char* field, const std::vector<std::string>& set, const std::string& s) {
    if (!contains(set, s)) throw VocabularyError(std::string(field) + ": unknown symbol '" + s + "'");
  };

  std::vector<Rule> out;
  auto measurement = [&](const char* name, const std::optional<Decimal>& value) {
    if (value) out.push_back(fact("measurement", {sym(name), num(*value)}));
  };
  if (r.stage) {
    member("stage", v.stages, *r.stage);
    out.push_back(fact("accf_stage", {sym(*r.stage)}));
  }
  if (r.nyha_class) out.push_back(fact("nyha_class", {num(Decimal::from_int(*r.nyha_class))}));
  if (r.expectation_of_survival) {
    out.push_back(fact("expectation_of_survival", {num(*r.expectation_of_survival)}));
  }
  if (r.gender) out.push_back(fact("gender", {symbol("gender", *r.gender)}));
  if (r.age) out.push_back(fact("age", {num(*r.age)}));
  if (r.race) out.push_back(fact("race", {symbol("race", *r.race)}));
  if (r.hf_with_reduced_ef) out.push_back(fact("hf_with_reduced_ef", {}, !*r.hf_with_reduced_ef));
  measurement("creatinine", r.creatinine);
  measurement("potassium", r.potassium);
  measurement("lvef", r.lvef);
  measurement("qrs_duration", r.qrs_duration);
  measurement("lbbb", r.lbbb);
  if (r.sinus_rhythm) out.push_back(fact("measurement", {sym("sinus_rhythm")}, !*r.sinus_rhythm));
  measurement("weight", r.weight);
  for (const auto& d : r.diagnoses) {
    member("diagnoses", v.diseases, d);
    out.push_back(fact("diagnosis", {sym(d)}));
  }
  for (const auto& e : r.evidences) {
    member("evidences", v.diseases, e);
    out.push_back(fact("evidence", {sym(e)}));
  }
  for (const auto& h : r.histories) {
    member("histories", v.history_conditions, h.condition);
    member("histories", v.recencies, h.recency);
    if (h.recency == "unspecified") {
      out.push_back(fact("history", {sym(h.condition)}));
    } else {
      out.push_back(fact("history", {sym(h.condition), sym(h.recency)}));
    }
  }
  if (r.post_mi_days) out.push_back(fact("post_mi", {num(*r.post_mi_days)}));
  if (r.pregnancy) out.push_back(fact("pregnancy", {}, !*r.pregnancy));
  for (const auto& f : r.flags) {
    member("flags", v.flags, f);
    out.push_back(fact(f));
  }
  return out;
}

Program load_kb(const std::vector<std::filesystem::path>& paths) {
  std::vector<Program> parts;
  for (const auto& path : paths) {
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".lp") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) parts.push_back(parse_file(f));
    } else {
      parts.push_back(parse_file(path));
    }
  }
  return patterns::expand_programs(parts);
}

std::vector<std::filesystem::path> default_kb_paths(const std::filesystem::path& kb_dir) {
  return {kb_dir / "bridge.lp", kb_dir / "stage_a.lp", kb_dir / "stage_b.lp",
          kb_dir / "stage_c.lp", kb_dir / "devices.lp"};
}

std::vector<Recommendation> recommend(const std::vector<Rule>& facts, const Program& kb,
                                      std::size_t limit, const SolveOptions& options) {
  std::vector<Recommendation> out;
  if (limit == 0) return out;
  Program p = kb;
  p.rules.insert(p.rules.end(), facts.begin(), facts.end());
  Solver solver(ground_program(p), options);
  solver.for_each_answer(parse_query("recommendation(Treatment, Class)"),
                         [&](const PartialAnswerSet& a) {
                           out.push_back({to_string(a.bindings.at("Treatment")),
                                          to_string(a.bindings.at("Class")), a});
                           return out.size() >= limit ? Solver::Next::Stop
                                                      : Solver::Next::NextBinding;
                         });
  return out;
}

std::vector<Recommendation> recommend(const PatientRecord& r, const Program& kb,
                                      std::size_t limit, const SolveOptions& options) {
  return recommend(patient_to_facts(r), kb, limit, options);
}

std::vector<Signature> default_abducibles() {
  std::vector<Signature> out = vocabulary().fact_predicates;
  out.push_back({"contraindication", 1});
  return out;
}

}  // namespace chf::kb
