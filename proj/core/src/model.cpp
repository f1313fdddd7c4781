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

#include "chf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "chf/errors.hpp"

namespace chf {

namespace {

constexpr int kMaxScale = 18;

__int128 scaled(const Decimal& d, int scale) {
  __int128 v = d.mantissa();
  for (int i = d.scale(); i < scale; ++i) v *= 10;
  return v;
}

template <class T>
void hash_combine(std::size_t& seed, const T& v) {
  seed ^= std::hash<T>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

Decimal::Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
  if (mantissa_ == 0) scale_ = 0;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  bool negative = false;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t mantissa = 0;
  int scale = 0;
  bool digits = false;
  bool point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    if (mantissa > (std::numeric_limits<std::int64_t>::max() - 9) / 10) return std::nullopt;
    mantissa = mantissa * 10 + (c - '0');
    digits = true;
    if (point) {
      if (++scale > kMaxScale) return std::nullopt;
    }
  }
  if (!digits) return std::nullopt;
  if (point && scale == 0) return std::nullopt;  // "1." is not a number
  return Decimal(negative ? -mantissa : mantissa, scale);
}

double Decimal::to_double() const { return static_cast<double>(mantissa_) / std::pow(10.0, scale_); }

std::string Decimal::to_string() const {
  std::string digits = std::to_string(mantissa_ < 0 ? -mantissa_ : mantissa_);
  if (scale_ > 0) {
    if (static_cast<int>(digits.size()) <= scale_) {
      digits.insert(0, static_cast<std::size_t>(scale_) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale_), ".");
  }
  return mantissa_ < 0 ? "-" + digits : digits;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  int scale = std::max(a.scale(), b.scale());
  __int128 x = scaled(a, scale);
  __int128 y = scaled(b, scale);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  return a.kind == TermKind::Number ? a.number == b.number : a.name == b.name;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.kind == TermKind::Number) return a.number <=> b.number;
  return a.name <=> b.name;
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.atom <=> b.atom; c != 0) return c;
  return a.strong_neg <=> b.strong_neg;
}

bool Rule::is_ground() const { return variables_of(*this).empty(); }

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Aggressive: return "aggressive";
    case PatternKind::Conservative: return "conservative";
    case PatternKind::AntiRecommendation: return "anti";
    case PatternKind::Preference: return "prefer";
    case PatternKind::Concomitant: return "concomitant";
    case PatternKind::Indispensable: return "indispensable";
    case PatternKind::Incompatible: return "incompatible";
  }
  return "";
}

std::optional<PatternKind> pattern_kind_from_keyword(std::string_view keyword) {
  for (auto k : {PatternKind::Aggressive, PatternKind::Conservative,
                 PatternKind::AntiRecommendation, PatternKind::Preference,
                 PatternKind::Concomitant, PatternKind::Indispensable,
                 PatternKind::Incompatible}) {
    if (to_string(k) == keyword) return k;
  }
  return std::nullopt;
}

void Program::append(const Program& other) {
  rules.insert(rules.end(), other.rules.begin(), other.rules.end());
  for (const auto& sig : other.abducibles) add_abducible(sig);
  patterns.insert(patterns.end(), other.patterns.begin(), other.patterns.end());
}

void Program::add_abducible(const Signature& sig) {
  if (std::find(abducibles.begin(), abducibles.end(), sig) == abducibles.end()) {
    abducibles.push_back(sig);
  }
}

Literal complement(const Literal& l) { return Literal{l.atom, !l.strong_neg}; }

namespace {

Term bind_term(const Term& t, const Binding& b) {
  if (!t.is_variable()) return t;
  auto it = b.find(t.name);
  return it == b.end() ? t : it->second;
}

void collect(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) {
    out.push_back(t.name);
  }
}

void collect(const Literal& l, std::vector<std::string>& out) {
  for (const auto& t : l.atom.args) collect(t, out);
}

void collect(const BodyElement& e, std::vector<std::string>& out) {
  if (e.kind == BodyElement::Kind::Builtin) {
    collect(e.builtin.lhs, out);
    collect(e.builtin.rhs, out);
  } else {
    collect(e.literal, out);
  }
}

}  // namespace

Literal apply_binding(const Literal& l, const Binding& b) {
  Literal out = l;
  for (auto& t : out.atom.args) t = bind_term(t, b);
  return out;
}

BodyElement apply_binding(const BodyElement& e, const Binding& b) {
  BodyElement out = e;
  if (e.kind == BodyElement::Kind::Builtin) {
    out.builtin.lhs = bind_term(e.builtin.lhs, b);
    out.builtin.rhs = bind_term(e.builtin.rhs, b);
  } else {
    out.literal = apply_binding(e.literal, b);
  }
  return out;
}

Rule apply_binding(const Rule& r, const Binding& b) {
  Rule out;
  out.line = r.line;
  if (r.head) out.head = apply_binding(*r.head, b);
  out.body.reserve(r.body.size());
  for (const auto& e : r.body) out.body.push_back(apply_binding(e, b));
  return out;
}

std::vector<std::string> variables_of(const std::vector<BodyElement>& body) {
  std::vector<std::string> out;
  for (const auto& e : body) collect(e, out);
  return out;
}

std::vector<std::string> variables_of(const Rule& r) {
  std::vector<std::string> out;
  if (r.head) collect(*r.head, out);
  for (const auto& e : r.body) collect(e, out);
  return out;
}

std::optional<std::string> unsafe_variable(const Rule& r) {
  std::set<std::string> bound;
  for (const auto& e : r.body) {
    if (e.kind == BodyElement::Kind::Positive) {
      for (const auto& t : e.literal.atom.args) {
        if (t.is_variable()) bound.insert(t.name);
      }
    }
  }
  for (const auto& v : variables_of(r)) {
    if (!bound.contains(v)) return v;
  }
  return std::nullopt;
}

bool evaluate(CompareOp op, const Decimal& lhs, const Decimal& rhs) {
  switch (op) {
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
  }
  return false;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
  }
  return "?";
}

std::string to_string(const Term& t) {
  return t.is_number() ? t.number.to_string() : t.name;
}

std::string to_string(const Atom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += to_string(a.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string to_string(const Literal& l) { return (l.strong_neg ? "-" : "") + to_string(l.atom); }

std::string to_string(const BodyElement& e) {
  switch (e.kind) {
    case BodyElement::Kind::Positive: return to_string(e.literal);
    case BodyElement::Kind::Naf: return "not " + to_string(e.literal);
    case BodyElement::Kind::Builtin:
      return to_string(e.builtin.lhs) + " " + std::string(to_string(e.builtin.op)) + " " +
             to_string(e.builtin.rhs);
  }
  return "";
}

std::string to_string(const Rule& r) {
  std::string out;
  if (r.head) out = to_string(*r.head);
  if (!r.body.empty() || !r.head) {
    out += r.head ? " :- " : ":- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.body[i]);
    }
  }
  out += '.';
  return out;
}

std::size_t hash_value(const Term& t) {
  std::size_t seed = static_cast<std::size_t>(t.kind);
  if (t.is_number()) {
    hash_combine(seed, t.number.mantissa());
    hash_combine(seed, t.number.scale());
  } else {
    hash_combine(seed, t.name);
  }
  return seed;
}

std::size_t hash_value(const Atom& a) {
  std::size_t seed = std::hash<std::string>{}(a.predicate);
  for (const auto& t : a.args) hash_combine(seed, t);
  return seed;
}

std::size_t hash_value(const Literal& l) {
  std::size_t seed = hash_value(l.atom);
  hash_combine(seed, l.strong_neg);
  return seed;
}

}  // namespace chf
