#include <doctest.h>

#include "printers.hpp"

#include <algorithm>

#include "gasp/engine.hpp"
#include "gasp/oracle.hpp"

using namespace gasp;

namespace {

const char* kFourRule = "p :- not q.\nq :- not p.\nr :- not s.\ns :- not r.\n";

std::vector<std::string> answers(const char* program, const char* query, SolveOptions o = {}) {
  GroundProgram gp = ground(parse_program(program));
  std::vector<std::string> out;
  for (const auto& a : enumerate_all(gp, parse_query(query), o)) out.push_back(render(a));
  return out;
}

bool contains(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("four-rule even loops: query q") {
  CHECK(answers(kFourRule, "q") == std::vector<std::string>{"{ q, not p }"});
}

TEST_CASE("four-rule even loops: query q, s") {
  CHECK(answers(kFourRule, "q, s") == std::vector<std::string>{"{ q, not p, s, not r }"});
}

TEST_CASE("odd loop has no answers") {
  CHECK(answers("p :- not p.", "p").empty());
  CHECK(answers("p :- not p.", "not p").empty());
}

TEST_CASE("even loop choice is fixed by the query") {
  CHECK(answers("p :- not q. q :- not p.", "p") == std::vector<std::string>{"{ p, not q }"});
  CHECK(answers("p :- not q. q :- not p.", "not p") == std::vector<std::string>{"{ not p, q }"});
}

TEST_CASE("definite program") {
  CHECK(answers("a. b :- a.", "b") == std::vector<std::string>{"{ b, a }"});
  CHECK(answers("a. b :- a.", "not b").empty());
}

TEST_CASE("atoms without rules are false") {
  CHECK(answers("p :- q.", "p").empty());
  // q is underivable, so the grounder drops p :- q and p has no rules.
  CHECK(answers("p :- q.", "not p") == std::vector<std::string>{"{ not p }"});
  CHECK(answers("p.", "zzz").empty());
  CHECK(answers("p.", "not zzz") == std::vector<std::string>{"{ not zzz }"});
}

TEST_CASE("positive loops are unfounded") {
  CHECK(answers("p :- p.", "p").empty());
  CHECK(answers("p :- q. q :- p.", "p").empty());
  CHECK(answers("p :- q. q :- p.", "not p") == std::vector<std::string>{"{ not p }"});
  CHECK(answers("p :- q. q :- p. q.", "p") == std::vector<std::string>{"{ p, q }"});
}

TEST_CASE("constraints are enforced by the NMR check") {
  CHECK(answers("p :- not q. q :- not p. :- p.", "p").empty());
  CHECK(answers("p :- not q. q :- not p. :- p.", "q") == std::vector<std::string>{"{ q, not p }"});
}

TEST_CASE("odd loop kills models reached from elsewhere") {
  // a :- not b, b :- not a, plus p :- not p, not a: only models with a.
  const char* prog = "a :- not b. b :- not a. p :- not p, not a.";
  CHECK(answers(prog, "b").empty());
  CHECK(answers(prog, "a") == std::vector<std::string>{"{ a, not b }"});
}

TEST_CASE("several answers are enumerated lazily") {
  GroundProgram gp = ground(parse_program("x :- p. x :- q. p :- not q. q :- not p."));
  Solver s = solve(gp, parse_query("x"));
  auto a1 = s.next();
  auto a2 = s.next();
  REQUIRE(a1);
  REQUIRE(a2);
  CHECK(render(*a1) == "{ x, p, not q }");
  CHECK(render(*a2) == "{ x, q, not p }");
  CHECK_FALSE(s.next());
  CHECK(s.steps() > 0);
}

TEST_CASE("duplicates differing only in hidden atoms are suppressed") {
  const char* prog = "x :- _h1. x :- _h2. _h1. _h2.";
  CHECK(answers(prog, "x").size() == 1);
  GroundProgram gp = ground(parse_program(prog));
  Solver s(gp, SolveOptions{100'000, false});
  s.start(parse_query("x"));
  int n = 0;
  while (s.next()) ++n;
  CHECK(n == 2);
}

TEST_CASE("query variables enumerate bindings") {
  auto a = answers("r(a). r(b). s(X) :- r(X), not t(X). t(b).", "s(X)");
  CHECK(a == std::vector<std::string>{"{ s(a), r(a), not t(a) }"});
  CHECK_THROWS_AS(answers("r(a).", "not r(X)"), QueryError);
  CHECK(answers("r(a). r(b).", "r(X), not r(X)").empty());
}

TEST_CASE("depth limit is a hard error") {
  std::string prog;
  for (int i = 0; i < 50; ++i) prog += "p" + std::to_string(i) + " :- p" + std::to_string(i + 1) + ".\n";
  prog += "p50.\n";
  CHECK(answers(prog.c_str(), "p0").size() == 1);
  CHECK_THROWS_AS(answers(prog.c_str(), "p0", SolveOptions{10, true}), DepthLimitExceeded);
}

TEST_CASE("classification of rules") {
  SUBCASE("odd loop") {
    GroundProgram gp = ground(parse_program("p :- not p."));
    auto c = classify_rules(gp);
    CHECK(c.olon_rules == std::vector<std::uint32_t>{0});
    REQUIRE(c.nmr_checks.size() == 1);
    CHECK(c.nmr_checks[0].head == gp.find(parse_atom("p")));
    CHECK(oracle::enumerate_stable_models(gp).models.empty());
  }
  SUBCASE("even loops are ordinary") {
    auto c = classify_rules(ground(parse_program(kFourRule)));
    CHECK(c.olon_rules.empty());
    CHECK(c.ordinary_rules == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(c.even_loop_rules == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(c.nmr_checks.empty());
  }
  SUBCASE("constraint") {
    GroundProgram gp = ground(parse_program("p :- not q. q :- not p. :- p."));
    auto c = classify_rules(gp);
    REQUIRE(c.nmr_checks.size() == 1);
    CHECK_FALSE(c.nmr_checks[0].head.has_value());
    CHECK(c.nmr_checks[0].body == std::vector<GroundLiteral>{{*gp.find(parse_atom("p")), false}});
  }
  SUBCASE("a rule can be both OLON and ordinary") {
    // p :- not q, r. q :- not p. r :- not p.  The r path is odd, the q
    // path even.
    auto c = classify_rules(ground(parse_program("p :- not q, r. q :- not p. r :- not p.")));
    CHECK(contains(c.olon_rules, 0));
    CHECK(contains(c.ordinary_rules, 0));
  }
  SUBCASE("stratified rules are ordinary only") {
    auto c = classify_rules(ground(parse_program("a. b :- a, not c.")));
    CHECK(c.olon_rules.empty());
    CHECK(c.ordinary_rules.size() == 2);
    CHECK(c.even_loop_rules.empty());
  }
}

TEST_CASE("independent solvers share one ground program") {
  GroundProgram gp = ground(parse_program(kFourRule));
  Solver a = solve(gp, parse_query("p"));
  Solver b = solve(gp, parse_query("q"));
  CHECK(render(*a.next()) == "{ p, not q }");
  CHECK(render(*b.next()) == "{ q, not p }");
}
