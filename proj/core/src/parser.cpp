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

#include "chf/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <variant>

#include "chf/errors.hpp"
#include "chf/patterns.hpp"

namespace chf {

namespace {

enum class Tok {
  Ident,
  Variable,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  If,     // :-
  Query,  // ?-
  Minus,
  Slash,
  Compare,
  Directive,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(std::string_view src, bool allow_reserved) : src_(src), allow_reserved_(allow_reserved) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      int line = line_;
      int col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, c), line, col});
      };
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word = take_word();
        if (word.starts_with(kReservedPrefix)) {
          if (!allow_reserved_) throw ParseError("reserved '__' prefix", line, col, word);
        } else if (word[0] == '_') {
          throw ParseError("identifiers may not start with '_'", line, col, word);
        }
        bool upper = std::isupper(static_cast<unsigned char>(word[0])) != 0;
        out.push_back({upper ? Tok::Variable : Tok::Ident, word, line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 ((c == '-' || c == '+') && digit_at(pos_ + 1) && !follows_operand(out))) {
        out.push_back({Tok::Number, take_number(line, col), line, col});
      } else if (c == '(') {
        single(Tok::LParen);
      } else if (c == ')') {
        single(Tok::RParen);
      } else if (c == '[') {
        single(Tok::LBracket);
      } else if (c == ']') {
        single(Tok::RBracket);
      } else if (c == ',') {
        single(Tok::Comma);
      } else if (c == '.') {
        single(Tok::Dot);
      } else if (c == '/') {
        single(Tok::Slash);
      } else if (c == ':' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::If, ":-", line, col});
      } else if (c == '?' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::Query, "?-", line, col});
      } else if (c == '-') {
        single(Tok::Minus);
      } else if (c == '<' || c == '>') {
        std::string op(1, c);
        advance();
        if (peek(0) == '=') {
          op += '=';
          advance();
        }
        out.push_back({Tok::Compare, op, line, col});
      } else if ((c == '=' || c == '!') && peek(1) == '=') {
        advance(2);
        out.push_back({Tok::Compare, std::string(1, c) + "=", line, col});
      } else if (c == '=') {
        advance();
        out.push_back({Tok::Compare, "==", line, col});
      } else if (c == '#') {
        advance();
        std::string word = take_word();
        if (word.empty()) throw ParseError("expected directive name after '#'", line, col, "#");
        out.push_back({Tok::Directive, word, line, col});
      } else {
        std::size_t len = utf8_length(static_cast<unsigned char>(c));
        throw ParseError("unexpected character", line, col,
                         std::string(src_.substr(pos_, std::min(len, src_.size() - pos_))));
      }
    }
  }

 private:
  static std::size_t utf8_length(unsigned char c) {
    if (c >= 0xF0) return 4;
    if (c >= 0xE0) return 3;
    if (c >= 0xC0) return 2;
    return 1;
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  // A '-' directly after a term is never a sign; "-1" after an operator is.
  static bool follows_operand(const std::vector<Token>& out) {
    if (out.empty()) return false;
    Tok k = out.back().kind;
    return k == Tok::Ident || k == Tok::Variable || k == Tok::Number || k == Tok::RParen;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string take_word() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string take_number(int line, int col) {
    std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    while (digit_at(pos_)) advance();
    if (peek(0) == '.' && digit_at(pos_ + 1)) {
      advance();
      while (digit_at(pos_)) advance();
    }
    std::string text(src_.substr(start, pos_ - start));
    if (!Decimal::parse(text)) throw ParseError("number out of range", line, col, text);
    return text;
  }

  std::string_view src_;
  bool allow_reserved_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Argument of a #pattern directive before it is interpreted.
struct PatternArg;
using ListItem = std::variant<BodyElement, std::vector<BodyElement>>;

struct PatternArg {
  enum class Kind { Term, Compound, List } kind = Kind::Term;
  Term term;
  std::string functor;
  std::vector<PatternArg> args;
  std::vector<ListItem> items;
  int line = 0;
  int column = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (!at(Tok::End)) statement(p);
    return p;
  }

  Query query() {
    Query q;
    accept(Tok::Query);
    if (at(Tok::End) || at(Tok::Dot)) fail("empty goal list");
    q.goals = body();
    accept(Tok::Dot);
    if (!at(Tok::End)) fail("unexpected input after query");
    return q;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  const Token& next() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = cur();
    throw ParseError(msg, t.line, t.column, t.kind == Tok::End ? "<end of input>" : t.text);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }

  void statement(Program& p) {
    int line = cur().line;
    if (at(Tok::Directive)) {
      directive(p);
      return;
    }
    Rule r;
    r.line = line;
    if (!at(Tok::If)) r.head = literal();
    if (accept(Tok::If)) {
      if (at(Tok::Dot)) fail("empty rule body");
      r.body = body();
    } else if (!r.head) {
      fail("expected rule");
    }
    expect(Tok::Dot, "'.' at end of rule");
    p.rules.push_back(std::move(r));
  }

  void directive(Program& p) {
    const Token& d = next();
    if (d.text == "abducible") {
      std::string name = expect(Tok::Ident, "predicate name").text;
      expect(Tok::Slash, "'/'");
      const Token& n = expect(Tok::Number, "arity");
      auto arity = Decimal::parse(n.text);
      if (!arity || arity->scale() != 0 || arity->mantissa() < 0) {
        throw ParseError("arity must be a non-negative integer", n.line, n.column, n.text);
      }
      expect(Tok::Dot, "'.' after directive");
      p.add_abducible({name, static_cast<std::size_t>(arity->mantissa())});
    } else if (d.text == "pattern") {
      PatternArg arg = pattern_arg();
      expect(Tok::Dot, "'.' after directive");
      p.patterns.push_back(to_pattern(arg, d.line));
    } else {
      throw ParseError("unknown directive", d.line, d.column, "#" + d.text);
    }
  }

  std::vector<BodyElement> body() {
    std::vector<BodyElement> out;
    out.push_back(element());
    while (accept(Tok::Comma)) out.push_back(element());
    return out;
  }

  BodyElement element() {
    if (at(Tok::Ident) && cur().text == "not") {
      ++pos_;
      return BodyElement::naf(literal());
    }
    if (at(Tok::Variable) || at(Tok::Number)) {
      Term lhs = term();
      return comparison(std::move(lhs));
    }
    Literal l = literal();
    if (at(Tok::Compare)) {
      if (l.strong_neg || !l.atom.args.empty()) fail("comparison operand must be a term");
      return comparison(Term::constant(l.atom.predicate));
    }
    return BodyElement::pos(std::move(l));
  }

  BodyElement comparison(Term lhs) {
    if (!at(Tok::Compare)) fail("expected comparison operator");
    std::string op = next().text;
    Term rhs = term();
    static const std::pair<const char*, CompareOp> kOps[] = {
        {"<", CompareOp::Lt}, {"<=", CompareOp::Le}, {">", CompareOp::Gt},
        {">=", CompareOp::Ge}, {"==", CompareOp::Eq}, {"!=", CompareOp::Ne}};
    for (const auto& [text, value] : kOps) {
      if (op == text) return BodyElement::compare(std::move(lhs), value, std::move(rhs));
    }
    fail("unknown operator");
  }

  Literal literal() {
    if (accept(Tok::LParen)) {
      Literal l = literal();
      expect(Tok::RParen, "')'");
      return l;
    }
    Literal l;
    l.strong_neg = accept(Tok::Minus);
    if (at(Tok::LParen)) {
      Literal inner = literal();
      if (inner.strong_neg && l.strong_neg) fail("double classical negation");
      inner.strong_neg = inner.strong_neg || l.strong_neg;
      return inner;
    }
    if (!at(Tok::Ident) || cur().text == "not") fail("expected literal");
    l.atom.predicate = next().text;
    if (accept(Tok::LParen)) {
      l.atom.args.push_back(term());
      while (accept(Tok::Comma)) l.atom.args.push_back(term());
      expect(Tok::RParen, "')'");
    }
    return l;
  }

  Term term() {
    if (accept(Tok::LParen)) {
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Ident)) {
      if (cur().text == "not") fail("'not' is not a term");
      return Term::constant(next().text);
    }
    if (at(Tok::Variable)) return Term::variable(next().text);
    if (at(Tok::Number)) return Term::num(*Decimal::parse(next().text));
    fail("expected term");
  }

  PatternArg pattern_arg() {
    PatternArg a;
    a.line = cur().line;
    a.column = cur().column;
    if (accept(Tok::LBracket)) {
      a.kind = PatternArg::Kind::List;
      if (!accept(Tok::RBracket)) {
        a.items.push_back(list_item());
        while (accept(Tok::Comma)) a.items.push_back(list_item());
        expect(Tok::RBracket, "']'");
      }
      return a;
    }
    if (at(Tok::Ident) && toks_[pos_ + 1].kind == Tok::LParen) {
      a.kind = PatternArg::Kind::Compound;
      a.functor = next().text;
      ++pos_;
      a.args.push_back(pattern_arg());
      while (accept(Tok::Comma)) a.args.push_back(pattern_arg());
      expect(Tok::RParen, "')'");
      return a;
    }
    a.term = term();
    return a;
  }

  ListItem list_item() {
    if (accept(Tok::LBracket)) {
      std::vector<BodyElement> conj = body();
      expect(Tok::RBracket, "']'");
      return conj;
    }
    return element();
  }

  PatternDecl to_pattern(const PatternArg& a, int line) const;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// --- #pattern interpretation ------------------------------------------------

[[noreturn]] void malformed(const std::string& field, const std::string& msg, int line) {
  throw MalformedPattern(field, msg, line);
}

const PatternArg& compound(const PatternArg& a, std::string_view functor, std::size_t arity,
                           int line) {
  if (a.kind != PatternArg::Kind::Compound || a.functor != functor || a.args.size() != arity) {
    malformed(std::string(functor),
              "expected " + std::string(functor) + "/" + std::to_string(arity), line);
  }
  return a;
}

std::string symbol(const PatternArg& a, const std::string& field, int line) {
  if (a.kind != PatternArg::Kind::Term || !a.term.is_constant()) {
    malformed(field, "expected a constant", line);
  }
  return a.term.name;
}

std::vector<BodyElement> element_list(const PatternArg& wrapper, std::string_view functor,
                                      int line) {
  const PatternArg& c = compound(wrapper, functor, 1, line);
  const PatternArg& list = c.args[0];
  if (list.kind != PatternArg::Kind::List) malformed(std::string(functor), "expected a list", line);
  std::vector<BodyElement> out;
  for (const auto& item : list.items) {
    if (!std::holds_alternative<BodyElement>(item)) {
      malformed(std::string(functor), "nested lists are only allowed in dangers", line);
    }
    out.push_back(std::get<BodyElement>(item));
  }
  return out;
}

std::vector<std::vector<BodyElement>> danger_list(const PatternArg& wrapper, int line) {
  const PatternArg& c = compound(wrapper, "dangers", 1, line);
  if (c.args[0].kind != PatternArg::Kind::List) malformed("dangers", "expected a list", line);
  std::vector<std::vector<BodyElement>> out;
  for (const auto& item : c.args[0].items) {
    if (const auto* e = std::get_if<BodyElement>(&item)) {
      out.push_back({*e});
    } else {
      out.push_back(std::get<std::vector<BodyElement>>(item));
    }
  }
  return out;
}

Choice choice_arg(const PatternArg& a, std::string_view functor, bool with_class, int line) {
  const PatternArg& c = compound(a, functor, with_class ? 2 : 1, line);
  Choice ch;
  ch.name = symbol(c.args[0], std::string(functor), line);
  if (with_class) ch.cls = symbol(c.args[1], std::string(functor), line);
  return ch;
}

bool is_functor(const PatternArg& a, std::string_view f) {
  return a.kind == PatternArg::Kind::Compound && a.functor == f;
}

PatternDecl Parser::to_pattern(const PatternArg& a, int line) const {
  if (a.kind != PatternArg::Kind::Compound) malformed("kind", "expected kind(...)", line);
  auto kind = pattern_kind_from_keyword(a.functor);
  if (!kind) malformed("kind", "unknown pattern kind '" + a.functor + "'", line);

  PatternDecl d;
  d.kind = *kind;
  d.line = line;
  const auto& args = a.args;
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      malformed("arity", a.functor + " takes " + std::to_string(lo) +
                             (lo == hi ? "" : "-" + std::to_string(hi)) + " arguments",
                line);
    }
  };

  switch (d.kind) {
    case PatternKind::Aggressive:
    case PatternKind::Conservative:
      need(3, 3);
      d.choices.push_back(choice_arg(args[0], "choice", true, line));
      d.conditions = element_list(args[1], "pre", line);
      d.dangers = danger_list(args[2], line);
      break;
    case PatternKind::AntiRecommendation:
      need(2, 2);
      d.choices.push_back(choice_arg(args[0], "choice", false, line));
      d.dangers = danger_list(args[1], line);
      break;
    case PatternKind::Preference:
      need(3, 3);
      d.choices.push_back(choice_arg(args[0], "first", true, line));
      d.choices.push_back(choice_arg(args[1], "second", true, line));
      d.conditions = element_list(args[2], "pre", line);
      break;
    case PatternKind::Concomitant:
    case PatternKind::Indispensable: {
      need(3, 4);
      const char* dep = d.kind == PatternKind::Concomitant ? "with" : "needs";
      d.choices.push_back(choice_arg(args[0], "trigger", true, line));
      d.choices.push_back(choice_arg(args[1], dep, true, line));
      d.conditions = element_list(args[2], "pre", line);
      if (args.size() == 4) d.when = element_list(args[3], "when", line);
      break;
    }
    case PatternKind::Incompatible: {
      need(2, 3);
      if (args[0].kind != PatternArg::Kind::List) malformed("group", "expected a list", line);
      d.group_class = symbol(args[1], "class", line);
      for (const auto& item : args[0].items) {
        const auto* e = std::get_if<BodyElement>(&item);
        if (!e || e->kind != BodyElement::Kind::Positive || e->literal.strong_neg ||
            !e->literal.atom.args.empty()) {
          malformed("group", "group members must be choice names", line);
        }
        d.choices.push_back({e->literal.atom.predicate, d.group_class});
      }
      if (args.size() == 3) {
        if (!is_functor(args[2], "pre")) malformed("pre", "expected pre([...])", line);
        d.conditions = element_list(args[2], "pre", line);
      }
      break;
    }
  }
  try {
    patterns::validate(d);
  } catch (const MalformedPattern& e) {
    malformed(e.field(), e.what(), line);
  }
  return d;
}

// --- printing ---------------------------------------------------------------

std::string join(const std::vector<BodyElement>& elems) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += to_string(elems[i]);
  }
  return out;
}

std::string list(const std::vector<BodyElement>& elems) { return "[" + join(elems) + "]"; }

}  // namespace

Program parse_program(std::string_view src, const ParseOptions& options) {
  Parser parser(Lexer(src, options.allow_reserved).run());
  return parser.program();
}

Query parse_query(std::string_view src) {
  Parser parser(Lexer(src, false).run());
  return parser.query();
}

std::string print_pattern(const PatternDecl& d) {
  auto choice = [](std::string_view f, const Choice& c) {
    return std::string(f) + "(" + c.name + (c.cls.empty() ? "" : ", " + c.cls) + ")";
  };
  auto dangers = [&] {
    std::string out = "dangers([";
    for (std::size_t i = 0; i < d.dangers.size(); ++i) {
      if (i) out += ", ";
      out += d.dangers[i].size() == 1 ? to_string(d.dangers[i][0]) : list(d.dangers[i]);
    }
    return out + "])";
  };
  std::string body;
  switch (d.kind) {
    case PatternKind::Aggressive:
    case PatternKind::Conservative:
      body = choice("choice", d.choices.at(0)) + ", pre(" + list(d.conditions) + "), " + dangers();
      break;
    case PatternKind::AntiRecommendation:
      body = choice("choice", {d.choices.at(0).name, ""}) + ", " + dangers();
      break;
    case PatternKind::Preference:
      body = choice("first", d.choices.at(0)) + ", " + choice("second", d.choices.at(1)) +
             ", pre(" + list(d.conditions) + ")";
      break;
    case PatternKind::Concomitant:
    case PatternKind::Indispensable:
      body = choice("trigger", d.choices.at(0)) + ", " +
             choice(d.kind == PatternKind::Concomitant ? "with" : "needs", d.choices.at(1)) +
             ", pre(" + list(d.conditions) + ")";
      if (!d.when.empty()) body += ", when(" + list(d.when) + ")";
      break;
    case PatternKind::Incompatible: {
      body = "[";
      for (std::size_t i = 0; i < d.choices.size(); ++i) {
        if (i) body += ", ";
        body += d.choices[i].name;
      }
      body += "], " + d.group_class;
      if (!d.conditions.empty()) body += ", pre(" + list(d.conditions) + ")";
      break;
    }
  }
  return "#pattern " + std::string(to_string(d.kind)) + "(" + body + ").";
}

std::string print_program(const Program& p) {
  struct Item {
    int line;
    std::string text;
  };
  std::vector<Item> items;
  for (const auto& sig : p.abducibles) {
    items.push_back({0, "#abducible " + sig.name + "/" + std::to_string(sig.arity) + "."});
  }
  for (const auto& d : p.patterns) items.push_back({d.line, print_pattern(d)});
  for (const auto& r : p.rules) items.push_back({r.line, to_string(r)});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.line < b.line; });
  std::string out;
  for (const auto& item : items) out += item.text + "\n";
  return out;
}

std::string print_query(const Query& q) { return "?- " + join(q.goals) + "."; }

}  // namespace chf
