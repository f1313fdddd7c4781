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

// CHF knowledge base: vocabulary, patient records, the record-to-facts
// bridge and the recommendation query.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chf/model.hpp"
#include "chf/solver.hpp"

namespace chf::kb {

struct Vocabulary {
  std::vector<Signature> fact_predicates;
  std::vector<Signature> derived_predicates;
  std::vector<std::string> class_labels;
  std::vector<std::string> treatments;        // pharmaceutical, objectives, devices
  std::vector<std::string> diseases;          // diagnosis/1 and evidence/1 arguments
  std::vector<std::string> history_conditions;
  std::vector<std::string> recencies;         // "recent", "remote", "unspecified"
  std::vector<std::string> stages;            // a..d
  std::vector<std::string> flags;             // 0-ary miscellany facts

  bool is_treatment(std::string_view s) const;
  bool is_class_label(std::string_view s) const;
};

const Vocabulary& vocabulary();

// Grouped listing of the record fields and the symbol sets, as JSON text.
std::string vocabulary_json();

struct History {
  std::string condition;
  std::string recency = "unspecified";

  friend bool operator==(const History&, const History&) = default;
};

/// Structured patient information. Every field is optional; an absent field
/// produces no fact.
struct PatientRecord {
  std::optional<std::string> gender;
  std::optional<Decimal> age;
  std::optional<std::string> race;
  std::optional<std::string> stage;
  std::optional<int> nyha_class;
  std::optional<Decimal> creatinine;
  std::optional<Decimal> potassium;
  std::optional<Decimal> lvef;
  std::optional<Decimal> qrs_duration;
  std::optional<Decimal> lbbb;
  std::optional<bool> sinus_rhythm;
  std::optional<Decimal> weight;
  std::vector<std::string> diagnoses;
  std::vector<std::string> evidences;
  std::vector<History> histories;
  std::optional<Decimal> expectation_of_survival;
  std::optional<Decimal> post_mi_days;
  std::optional<bool> hf_with_reduced_ef;
  std::optional<bool> pregnancy;
  std::vector<std::string> flags;

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

// Names of the JSON document keys, in canonical order.
const std::vector<std::string>& patient_fields();

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Every problem with a patient document: unknown keys, wrong JSON types,
/// out-of-range values and symbols outside the vocabulary.
std::vector<FieldIssue> check_patient_json(std::string_view json_text);

/// Parses a patient document. Throws ValidationError for the first issue
/// reported by check_patient_json.
PatientRecord patient_from_json(std::string_view json_text);
std::string patient_to_json(const PatientRecord& r);

/// Range checks (0 <= lvef <= 1, age >= 0, known stage, NYHA 1-4, known
/// recency). Throws ValidationError naming the field.
void validate(const PatientRecord& r);

// Non-fatal findings, e.g. a NYHA class recorded for a stage-A patient.
std::vector<std::string> validation_warnings(const PatientRecord& r);

/// Ground facts for a record, in a fixed order. False booleans become
/// classically negated facts. Throws VocabularyError for symbols outside
/// the vocabulary.
std::vector<Rule> patient_to_facts(const PatientRecord& r);

/// Reads .lp files (directories contribute their *.lp files in name order),
/// concatenates them and expands pattern declarations. Parse and pattern
/// errors are rethrown with the file path prepended to the message.
Program load_kb(const std::vector<std::filesystem::path>& paths);

// Files under the shipped kb/ directory.
std::vector<std::filesystem::path> default_kb_paths(const std::filesystem::path& kb_dir);

struct Recommendation {
  std::string treatment;
  std::string class_label;
  PartialAnswerSet support;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Solves ?- recommendation(T, C). over kb + facts and keeps the first
/// supporting answer for each (treatment, class) pair, up to `limit` pairs.
std::vector<Recommendation> recommend(const std::vector<Rule>& facts, const Program& kb,
                                      std::size_t limit, const SolveOptions& options = {});
std::vector<Recommendation> recommend(const PatientRecord& r, const Program& kb,
                                      std::size_t limit, const SolveOptions& options = {});

// Abducibles used for what-if queries when the KB declares none.
std::vector<Signature> default_abducibles();

}  // namespace chf::kb
