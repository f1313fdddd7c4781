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

#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chf/abduction.hpp"
#include "chf/errors.hpp"
#include "chf/grounder.hpp"
#include "chf/kb.hpp"
#include "chf/parser.hpp"
#include "wire.hpp"

namespace chf::cli {

namespace {

struct Options {
  std::string command;
  std::vector<std::string> kb;
  std::string patient;
  std::string facts;
  std::string query;
  std::size_t limit = 10;
  std::string format = "text";
  std::size_t step_budget = SolveOptions{}.step_budget;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One printed answer, whatever command produced it.
struct Answer {
  std::vector<std::pair<std::string, std::string>> bindings;  // query order
  const PartialAnswerSet* support = nullptr;
  const AbductiveResult* abduced = nullptr;
};

std::string braces(const std::vector<Literal>& pos, const std::vector<Literal>& neg) {
  std::string s = "{";
  const char* sep = " ";
  for (const auto& l : pos) {
    s += sep + to_string(l);
    sep = ", ";
  }
  for (const auto& l : neg) {
    s += sep + ("not " + to_string(l));
    sep = ", ";
  }
  return s + " }";
}

void print_text(std::ostream& out, const Answer& a, bool first) {
  if (!first) out << "\n";
  out << braces(a.support->positive, a.support->nafs) << "\n";
  for (std::size_t i = 0; i < a.bindings.size(); ++i) {
    out << a.bindings[i].first << " = " << a.bindings[i].second
        << (i + 1 < a.bindings.size() ? "," : "") << "\n";
  }
  if (a.abduced) {
    out << "Assumptions = " << braces(a.abduced->assumed_true, a.abduced->assumed_false) << "\n";
  }
}

void print_json(std::ostream& out, const Answer& a) {
  nlohmann::json bindings = nlohmann::json::object();
  for (const auto& [k, v] : a.bindings) bindings[k] = v;
  nlohmann::json assumptions = {{"positive", nlohmann::json::array()},
                                {"negative", nlohmann::json::array()}};
  if (a.abduced) assumptions = wire::assumptions(*a.abduced);
  nlohmann::json rec = {{"bindings", bindings},
                        {"positive", wire::literals(a.support->positive)},
                        {"nafs", wire::literals(a.support->nafs)},
                        {"assumptions", assumptions}};
  out << rec.dump() << "\n";
}

std::vector<std::pair<std::string, std::string>> ordered(const Binding& b, const Query& q) {
  Rule r;
  r.body = q.goals;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : variables_of(r)) {
    if (auto it = b.find(v); it != b.end()) out.emplace_back(v, to_string(it->second));
  }
  return out;
}

// KB files plus the --facts file, expanded together.
Program load_program(const Options& o) {
  std::vector<std::filesystem::path> paths(o.kb.begin(), o.kb.end());
  if (!o.facts.empty()) {
    if (!std::filesystem::is_regular_file(o.facts)) throw Error("cannot read " + o.facts);
    paths.emplace_back(o.facts);
  }
  return kb::load_kb(paths);
}

std::vector<Rule> patient_facts(const Options& o, std::ostream& err) {
  if (o.patient.empty()) return {};
  std::string text = read_file(o.patient);
  kb::PatientRecord r;
  try {
    r = kb::patient_from_json(text);
  } catch (const ValidationError& e) {
    throw Error(o.patient + ": " + e.what());
  }
  for (const auto& w : kb::validation_warnings(r)) err << "warning: " << w << "\n";
  return kb::patient_to_facts(r);
}

Query query_of(const Options& o) {
  if (o.query.empty()) throw UsageError(o.command + " requires --query");
  std::string text = o.query;
  auto last = text.find_last_not_of(" \t\r\n");
  if (last == std::string::npos || text[last] != '.') text += ".";
  return parse_query(text);
}

int emit(const Options& o, const std::vector<Answer>& answers, std::ostream& out) {
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (o.format == "text") {
      print_text(out, answers[i], i == 0);
    } else {
      print_json(out, answers[i]);
    }
  }
  return answers.empty() ? 1 : 0;
}

int execute(const Options& o, std::ostream& out, std::ostream& err) {
  SolveOptions engine;
  engine.step_budget = o.step_budget;

  if (o.command == "check-kb") {
    if (o.kb.empty() && o.facts.empty()) throw UsageError("check-kb requires --kb");
    Program p = load_program(o);
    for (auto& f : patient_facts(o, err)) p.rules.push_back(std::move(f));
    GroundProgram g = ground_program(p);
    if (o.format == "text") {
      out << "rules: " << p.rules.size() << "\n"
          << "ground rules: " << g.rules.size() << "\n"
          << "atoms: " << g.atom_universe.size() << "\n";
      for (const auto& w : g.warnings) out << "warning: " << w << "\n";
    } else {
      out << nlohmann::json{{"rules", p.rules.size()},
                            {"groundRules", g.rules.size()},
                            {"atoms", g.atom_universe.size()},
                            {"warnings", g.warnings}}
                 .dump()
          << "\n";
    }
    return 0;
  }

  if (o.command == "recommend") {
    if (o.patient.empty()) throw UsageError("recommend requires --patient");
    std::vector<Rule> facts = patient_facts(o, err);
    std::vector<kb::Recommendation> recs = kb::recommend(facts, load_program(o), o.limit, engine);
    std::vector<Answer> answers;
    for (const auto& r : recs) {
      answers.push_back({{{"Treatment", r.treatment}, {"Class", r.class_label}}, &r.support, nullptr});
    }
    return emit(o, answers, out);
  }

  Query q = query_of(o);
  Program p = load_program(o);
  for (auto& f : patient_facts(o, err)) p.rules.push_back(std::move(f));

  if (o.command == "solve") {
    std::vector<PartialAnswerSet> found = Solver(ground_program(p), engine).solve(q, o.limit);
    std::vector<Answer> answers;
    for (const auto& a : found) answers.push_back({ordered(a.bindings, q), &a, nullptr});
    return emit(o, answers, out);
  }

  if (p.abducibles.empty()) {
    for (const auto& s : kb::default_abducibles()) p.add_abducible(s);
  }
  std::vector<AbductiveResult> found = abduce(p, q, o.limit, engine);
  std::vector<Answer> answers;
  for (const auto& r : found) answers.push_back({ordered(r.answer.bindings, q), &r.answer, &r});
  return emit(o, answers, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Goal-directed answer set engine for the chronic heart failure knowledge base",
               "chf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--kb", o.kb, "Knowledge base file or directory of .lp files");
  app.add_option("--patient", o.patient, "Patient document (JSON)");
  app.add_option("--facts", o.facts, "Additional .lp facts or rules");
  app.add_option("--query", o.query, "Query, e.g. \"recommendation(T, C).\"");
  app.add_option("--limit", o.limit, "Maximum number of answers")->capture_default_str();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();
  app.add_option("--step-budget", o.step_budget, "Resolution steps per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  for (const char* name : {"solve", "recommend", "abduce", "check-kb"}) {
    app.add_subcommand(name)->callback([&o, name] { o.command = name; });
  }
  app.get_subcommand("solve")->description("Print partial answer sets for --query");
  app.get_subcommand("recommend")->description("Treatment recommendations for --patient");
  app.get_subcommand("abduce")->description("What-if answers for --query with assumptions");
  app.get_subcommand("check-kb")->description("Parse, expand and ground the KB without solving");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return execute(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace chf::cli
