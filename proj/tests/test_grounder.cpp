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

#include "chf/errors.hpp"
#include "chf/grounder.hpp"
#include "chf/parser.hpp"

using namespace chf;

namespace {

bool has_fact(const GroundProgram& g, std::string_view head) {
  return std::any_of(g.rules.begin(), g.rules.end(),
                     [&](const Rule& r) { return r.is_fact() && to_string(*r.head) == head; });
}

bool has_rule(const GroundProgram& g, std::string_view text) {
  return std::any_of(g.rules.begin(), g.rules.end(),
                     [&](const Rule& r) { return to_string(r) == text; });
}

constexpr std::string_view kReducedEf = "reduced_ef(X) :- measurement(lvef, X), X <= 0.40.\n";

}  // namespace

TEST_CASE("threshold comparison keeps the satisfied instance only") {
  auto low = ground_program(parse_program(std::string(kReducedEf) + "measurement(lvef, 0.35)."));
  CHECK(has_rule(low, "reduced_ef(0.35) :- measurement(lvef,0.35)."));

  auto high = ground_program(parse_program(std::string(kReducedEf) + "measurement(lvef, 0.55)."));
  CHECK_FALSE(has_rule(high, "reduced_ef(0.55) :- measurement(lvef,0.55)."));
  // The threshold itself is a domain element, so its own instance survives.
  CHECK(has_rule(high, "reduced_ef(0.4) :- measurement(lvef,0.4)."));
}

TEST_CASE("boundary value is included by <=") {
  auto g = ground_program(parse_program(std::string(kReducedEf) + "measurement(lvef, 0.4)."));
  CHECK(has_rule(g, "reduced_ef(0.4) :- measurement(lvef,0.4)."));
}

TEST_CASE("non-numeric bindings are skipped with a warning when nothing survives") {
  auto g = ground_program(parse_program("big(X) :- size(X), X > 10. size(small)."));
  CHECK(g.rules.size() == 1);
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0].find("big") != std::string::npos);

  auto quiet = ground_program(parse_program("big(X) :- size(X), X > 10. size(small). size(20)."));
  CHECK(quiet.warnings.empty());
  CHECK(has_rule(quiet, "big(20) :- size(20)."));
}

TEST_CASE("literal constant in a comparison is an error") {
  CHECK_THROWS_AS(ground_program(parse_program("p :- q(X), X < abc. q(1).")), GroundError);
}

TEST_CASE("unsafe rules are rejected") {
  CHECK_THROWS_AS(ground_program(parse_program("p(X) :- not q(X). q(a).")), GroundError);
  CHECK_THROWS_AS(ground_program(parse_program("p(X).")), GroundError);
  CHECK_THROWS_AS(ground_program(parse_program("p :- X > 1.")), GroundError);
  try {
    ground_program(parse_program("h(Y) :- p(X). p(a)."));
    FAIL("expected GroundError");
  } catch (const GroundError& e) {
    CHECK(std::string(e.what()).find("Y") != std::string::npos);
  }
}

TEST_CASE("herbrand domain") {
  auto d = herbrand_domain(parse_program("p(b, 2). q(a) :- r(1.5, c)."));
  REQUIRE(d.size() == 5);
  CHECK(d[0] == Term::num(Decimal(15, 1)));
  CHECK(d[1] == Term::num(Decimal::from_int(2)));
  CHECK(d[2] == Term::constant("a"));
  CHECK(d[4] == Term::constant("c"));
}

TEST_CASE("joins instantiate over the whole domain") {
  auto g = ground_program(parse_program("e(a, b). e(b, c). path(X, Z) :- e(X, Y), e(Y, Z)."));
  // 3 constants, 3 variables: 27 instances of the join rule.
  CHECK(g.rules.size() == 2 + 27);
  CHECK(has_rule(g, "path(a,c) :- e(a,b), e(b,c)."));
}

TEST_CASE("universe is sorted and includes body atoms") {
  auto g = ground_program(parse_program("a :- not b, -c. d."));
  std::vector<std::string> names;
  for (const auto& l : g.atom_universe) names.push_back(to_string(l));
  CHECK(std::is_sorted(g.atom_universe.begin(), g.atom_universe.end()));
  CHECK(names.size() == 4);
  CHECK(std::find(names.begin(), names.end(), "-c") != names.end());
}

TEST_CASE("grounding is deterministic") {
  std::string src = "r(X, Y) :- s(X), s(Y), not t(X), X < Y. s(3). s(1). s(2). t(2).";
  auto a = ground_program(parse_program(src));
  auto b = ground_program(parse_program(src));
  CHECK(a.rules == b.rules);
  CHECK(a.atom_universe == b.atom_universe);
  CHECK(has_fact(a, "s(3)"));
  CHECK(has_rule(a, "r(1,3) :- s(1), s(3), not t(1)."));
}

TEST_CASE("patterns are expanded before grounding") {
  auto g = ground_program(parse_program(
      "#pattern anti(choice(anticoagulation), dangers([bleeding])).\nbleeding."));
  CHECK(has_rule(g, "contraindication(anticoagulation) :- bleeding."));
}
