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

// Logic-program AST shared by the parser, grounder, solver and pattern
// compiler. Values are immutable once built and are safe to share across
// threads.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chf {

// Prefix reserved for atoms generated by program transformations.
inline constexpr std::string_view kReservedPrefix = "__";

/// Exact decimal number stored as mantissa * 10^-scale.
///
/// Always normalized (no trailing zeros in the fractional part), so
/// structural equality coincides with numeric equality: 0.40 == 0.4.
class Decimal {
 public:
  Decimal() = default;
  Decimal(std::int64_t mantissa, int scale);

  static Decimal from_int(std::int64_t v) { return Decimal(v, 0); }
  // Accepts an optional sign, digits and an optional fractional part.
  static std::optional<Decimal> parse(std::string_view text);

  std::int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const Decimal&, const Decimal&) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

enum class TermKind : std::uint8_t { Number, Constant, Variable };

struct Term {
  TermKind kind = TermKind::Constant;
  std::string name;  // constant or variable name
  Decimal number;

  static Term constant(std::string n) { return Term{TermKind::Constant, std::move(n), {}}; }
  static Term variable(std::string n) { return Term{TermKind::Variable, std::move(n), {}}; }
  static Term num(Decimal d) { return Term{TermKind::Number, {}, d}; }

  bool is_variable() const { return kind == TermKind::Variable; }
  bool is_number() const { return kind == TermKind::Number; }
  bool is_constant() const { return kind == TermKind::Constant; }

  friend bool operator==(const Term& a, const Term& b);
  // Numbers sort before constants, constants before variables.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct Literal {
  Atom atom;
  bool strong_neg = false;  // classical "-"

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

enum class CompareOp : std::uint8_t { Lt, Le, Gt, Ge, Eq, Ne };

struct Builtin {
  Term lhs;
  CompareOp op = CompareOp::Eq;
  Term rhs;

  friend bool operator==(const Builtin&, const Builtin&) = default;
};

struct BodyElement {
  enum class Kind : std::uint8_t { Positive, Naf, Builtin };

  Kind kind = Kind::Positive;
  Literal literal;  // Positive / Naf
  Builtin builtin;  // Builtin

  static BodyElement pos(Literal l) { return {Kind::Positive, std::move(l), {}}; }
  static BodyElement naf(Literal l) { return {Kind::Naf, std::move(l), {}}; }
  static BodyElement compare(Term lhs, CompareOp op, Term rhs) {
    return {Kind::Builtin, {}, Builtin{std::move(lhs), op, std::move(rhs)}};
  }

  friend bool operator==(const BodyElement&, const BodyElement&) = default;
};

struct Rule {
  std::optional<Literal> head;  // nullopt: constraint
  std::vector<BodyElement> body;
  int line = 0;  // source line, not part of identity

  bool is_fact() const { return head && body.empty(); }
  bool is_constraint() const { return !head.has_value(); }
  bool is_ground() const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body;
  }
};

struct Signature {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

enum class PatternKind : std::uint8_t {
  Aggressive,
  Conservative,
  AntiRecommendation,
  Preference,
  Concomitant,
  Indispensable,
  Incompatible,
};

std::string_view to_string(PatternKind kind);
std::optional<PatternKind> pattern_kind_from_keyword(std::string_view keyword);

struct Choice {
  std::string name;
  std::string cls;  // empty for anti-recommendation

  friend bool operator==(const Choice&, const Choice&) = default;
};

/// One knowledge-pattern declaration.
///
/// Field usage by kind:
///   aggressive / conservative: choices = {choice}, conditions, dangers
///   anti-recommendation:       choices = {choice}, dangers
///   preference:                choices = {first, second}, conditions
///   concomitant:               choices = {trigger, concomitant}, conditions, when
///   indispensable:             choices = {trigger, indispensable}, conditions, when
///   incompatible:              choices = group (all share group_class), conditions
struct PatternDecl {
  PatternKind kind = PatternKind::Aggressive;
  std::vector<Choice> choices;
  std::vector<BodyElement> conditions;
  std::vector<std::vector<BodyElement>> dangers;  // each entry is a conjunction
  std::vector<BodyElement> when;
  std::string group_class;  // incompatible only
  int line = 0;

  friend bool operator==(const PatternDecl& a, const PatternDecl& b) {
    return a.kind == b.kind && a.choices == b.choices && a.conditions == b.conditions &&
           a.dangers == b.dangers && a.when == b.when && a.group_class == b.group_class;
  }
};

struct Program {
  std::vector<Rule> rules;
  std::vector<Signature> abducibles;
  std::vector<PatternDecl> patterns;

  void append(const Program& other);
  void add_abducible(const Signature& sig);

  friend bool operator==(const Program&, const Program&) = default;
};

using Binding = std::map<std::string, Term>;

Literal complement(const Literal& l);
Rule apply_binding(const Rule& r, const Binding& b);
Literal apply_binding(const Literal& l, const Binding& b);
BodyElement apply_binding(const BodyElement& e, const Binding& b);

// Variables in order of first occurrence.
std::vector<std::string> variables_of(const Rule& r);
std::vector<std::string> variables_of(const std::vector<BodyElement>& body);

// Names the first variable violating rule safety, if any.
std::optional<std::string> unsafe_variable(const Rule& r);

bool evaluate(CompareOp op, const Decimal& lhs, const Decimal& rhs);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const BodyElement& e);
std::string to_string(const Rule& r);
std::string_view to_string(CompareOp op);

std::size_t hash_value(const Term& t);
std::size_t hash_value(const Atom& a);
std::size_t hash_value(const Literal& l);

}  // namespace chf

template <>
struct std::hash<chf::Term> {
  std::size_t operator()(const chf::Term& t) const { return chf::hash_value(t); }
};
template <>
struct std::hash<chf::Atom> {
  std::size_t operator()(const chf::Atom& a) const { return chf::hash_value(a); }
};
template <>
struct std::hash<chf::Literal> {
  std::size_t operator()(const chf::Literal& l) const { return chf::hash_value(l); }
};
