#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gasp/abduction.hpp"
#include "gasp/engine.hpp"
#include "property_checks.hpp"

using namespace gasp;
using namespace gasp::testing;

namespace {

void report(const PropertyReport& r) {
  for (const std::string& v : r.violations) MESSAGE(v);
  CHECK(r.violations.empty());
  CHECK(r.answers > 0);
}

std::set<std::string> visible_answers(const GroundProgram& gp, const Query& q) {
  std::set<std::string> out;
  for (const auto& a : enumerate_all(gp, q)) out.insert(render_set(a.visible_sorted()));
  return out;
}

}  // namespace

TEST_CASE("solver agrees with the oracle on random programs") {
  report(check_oracle_equivalence(11, 1200, RandomProgramShape{}, 0.0, 0.6));
}

TEST_CASE("solver agrees with the oracle on wider programs") {
  RandomProgramShape shape;
  shape.max_atoms = 10;
  shape.max_rules = 15;
  shape.constraint_rate = 0.15;
  report(check_oracle_equivalence(12, 600, shape, 0.0, 0.8));
}

TEST_CASE("explanations are sound, relevant and free of auxiliaries") {
  RandomProgramShape shape;
  shape.max_atoms = 6;
  shape.max_rules = 10;
  shape.negation_density = 0.35;
  report(check_abduction_soundness(21, 400, shape));
}

TEST_CASE("expansion without abducibles changes nothing") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 0;
    Program p = random_program(rng, RandomProgramShape{}, &n);
    Query q{Literal{Atom{atom_name(i % n), {}}, false}};
    GroundProgram gp = ground(p);
    std::vector<std::string> solved, abduced;
    for (const auto& a : enumerate_all(gp, q)) solved.push_back(render(a));
    for (const auto& a : abduce_all({p, q, {}})) {
      CHECK(a.explanation.empty());
      abduced.push_back(render(a.answer));
    }
    CHECK(solved == abduced);
  }
}

TEST_CASE("two-rule and four-rule expansions show the same answers") {
  std::mt19937_64 rng(41);
  RandomProgramShape shape;
  shape.max_atoms = 6;
  shape.max_rules = 10;
  for (int i = 0; i < 300; ++i) {
    RandomAbduction ra = random_abduction(rng, shape, 3);
    Program t = ra.problem.theory;
    for (const Atom& a : ra.problem.abducibles) t.abducibles.push_back({a, {}});
    auto four = visible_answers(ground(expand_abducibles(t)), ra.problem.observation);
    auto two = visible_answers(ground(expand_abducibles_two_rule(t)), ra.problem.observation);
    CHECK_MESSAGE(four == two, to_string(t));
  }
}
