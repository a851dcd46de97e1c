#pragma once

// Abduction on top of the goal-directed solver. Each abducible g gets the
// even-loop expansion
//
//   g :- not _neg_g, _abd_g.        _abd_g :- not _negabd_g.
//   _neg_g :- not g.                _negabd_g :- not _abd_g.
//
// appended after every fact and rule, so the solver may assume g either
// way when that lets the observation succeed. Only abducibles reached from
// the observation are ever assumed.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gasp/engine.hpp"
#include "gasp/grounder.hpp"
#include "gasp/syntax.hpp"

namespace gasp {

struct AbductionProblem {
  Program theory;
  Query observation;
  std::vector<Atom> abducibles;  ///< patterns; may contain variables
};

/// Signed abducible literals, in the order the solver assumed them.
struct Explanation {
  std::vector<Literal> literals;

  std::vector<Atom> assumed_true() const;
  std::vector<Atom> assumed_false() const;
  bool empty() const noexcept { return literals.empty(); }

  /// Set equality, ignoring order.
  bool same_as(const Explanation& other) const;
  /// Every literal of this explanation also occurs in `other`.
  bool subset_of(const Explanation& other) const;
};

struct Abduction {
  PartialAnswerSet answer;
  Explanation explanation;
};

/// True iff the flat atoms `a` and `b` unify, variables renamed apart.
bool unifiable(const Atom& a, const Atom& b);

/// True iff ground `atom` is an instance of `pattern`.
bool matches(const Atom& pattern, const Atom& atom);

/// Throws AbducibleConflict if a pattern unifies with a rule head, or uses
/// an auxiliary (underscore) predicate.
void check_abducibles(const Program& theory, std::span<const Atom> patterns);

/// Appends the four-rule expansion of every `#abducible` directive and
/// clears the directives.
Program expand_abducibles(const Program& program);

/// Older two-rule form (`g :- not _neg_g.  _neg_g :- not g.`). Same visible
/// behaviour for ground abducibles; kept for comparison.
Program expand_abducibles_two_rule(const Program& program);

/// A theory with its abducibles expanded, grounded and classified. Immutable
/// once built; any number of Abducers may share one.
struct PreparedTheory {
  std::vector<Atom> patterns;
  GroundProgram gp;
  RuleClassification classification;
};

/// Queries in `theory` are ignored; its own directives join `abducibles`.
std::shared_ptr<const PreparedTheory> prepare_theory(const Program& theory, std::span<const Atom> abducibles,
                                                     const GroundOptions& options = {});

/// Lazily enumerates (answer, explanation) pairs for an abduction problem.
class Abducer {
 public:
  explicit Abducer(const AbductionProblem& problem, SolveOptions options = {});
  Abducer(std::shared_ptr<const PreparedTheory> theory, const Query& observation, SolveOptions options = {});
  ~Abducer();
  Abducer(Abducer&&) noexcept;
  Abducer& operator=(Abducer&&) = delete;

  std::optional<Abduction> next();

  const GroundProgram& ground_program() const;
  std::span<const Atom> patterns() const;

 private:
  struct State;
  std::unique_ptr<State> s_;
};

/// Drains an Abducer. At most `limit` answers are kept (0 = unbounded).
std::vector<Abduction> abduce_all(const AbductionProblem& problem, SolveOptions options = {}, std::size_t limit = 0);

/// Distinct explanations, in first-found order.
std::vector<Explanation> distinct_explanations(const std::vector<Abduction>& answers);

/// Drops every explanation that strictly contains another one.
std::vector<Explanation> minimal_explanations(const std::vector<Explanation>& explanations);

/// One directive per vocabulary atom that is neither a profile fact nor
/// excluded (known absent, or settled by a measurement).
std::vector<AbducibleDirective> generate_abducible_declarations(std::span<const Atom> vocabulary,
                                                                std::span<const Atom> profile_facts,
                                                                std::span<const Atom> excluded = {});

/// `{ a, not b }` in assumption order.
std::string render(const Explanation& e);

/// The answer set with non-abducible literals first, then the abduced
/// ones, each group in derivation order.
std::string render_answer(const Abduction& a, std::span<const Atom> patterns);

}  // namespace gasp
