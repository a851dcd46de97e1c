#pragma once

// Goal-directed computation of partial stable models over a ground
// program: coinductive SLD resolution with a consistent hypothesis set
// (CHS), dual resolution for negated calls, and a final NMR check compiled
// from the rules that sit on odd loops over negation.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gasp/grounder.hpp"
#include "gasp/syntax.hpp"

namespace gasp {

/// One compiled global check. For an odd-loop rule `h :- B` it succeeds
/// when some literal of B fails or h holds; for a constraint `:- B` it
/// succeeds when some literal of B fails.
struct NmrCheck {
  std::uint32_t rule = 0;
  std::optional<AtomId> head;
  std::vector<GroundLiteral> body;
};

struct RuleClassification {
  std::vector<std::uint32_t> olon_rules;
  std::vector<std::uint32_t> ordinary_rules;
  /// Rules on a cycle through an even, non-zero number of negations.
  std::vector<std::uint32_t> even_loop_rules;
  std::vector<NmrCheck> nmr_checks;
};

RuleClassification classify_rules(const GroundProgram& gp);

struct SolveOptions {
  std::size_t depth_limit = 100'000;
  /// Suppress answers whose visible literals equal an earlier answer.
  bool unique = true;
};

/// Lazily enumerates the partial answer sets of a query.
///
/// The ground program (and the classification, if supplied) must outlive
/// the solver. A solver is single-threaded; independent solvers over the
/// same program may run concurrently.
class Solver {
 public:
  explicit Solver(const GroundProgram& gp, SolveOptions options = {});
  Solver(const GroundProgram& gp, const RuleClassification& classification, SolveOptions options = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) = delete;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Begins a new enumeration. Variables in positive query literals range
  /// over the program's atoms on backtracking; a variable that only occurs
  /// under negation raises QueryError.
  void start(const Query& query);

  /// Next answer, or nullopt when the enumeration is exhausted.
  std::optional<PartialAnswerSet> next();

  /// Resolution steps taken since start().
  std::size_t steps() const noexcept;

 private:
  struct Machine;
  std::unique_ptr<Machine> m_;
};

/// Convenience: a solver already started on `query`.
Solver solve(const GroundProgram& gp, const Query& query, SolveOptions options = {});

/// Drains solve(), keeping one answer per distinct visible literal set.
std::vector<PartialAnswerSet> enumerate_all(const GroundProgram& gp, const Query& query, SolveOptions options = {});

}  // namespace gasp
