#pragma once

// Brute-force stable-model oracle: tries every subset of the Herbrand base
// against the Gelfond-Lifschitz reduct. Test and verification use only.

#include <cstddef>
#include <vector>

#include "gasp/grounder.hpp"
#include "gasp/syntax.hpp"

namespace gasp::oracle {

struct OracleOptions {
  std::size_t max_atoms = 20;
};

struct StableModelSet {
  /// Each model sorted by atom order; models sorted lexicographically.
  std::vector<std::vector<Atom>> models;
};

StableModelSet enumerate_stable_models(const GroundProgram& gp, const OracleOptions& options = {});

/// Convenience overload: grounds first.
StableModelSet enumerate_stable_models(const Program& program, const OracleOptions& options = {});

/// Signed set of abducible atoms (duplicated here so the oracle does not
/// depend on the abduction module it checks).
struct Hypothesis {
  std::vector<Atom> assumed_true;
  std::vector<Atom> assumed_false;
};

/// True iff theory + assumed_true (as facts) has a stable model that
/// satisfies every literal of the observation and contains no assumed_false
/// atom.
bool verify_explanation(const Program& theory, const Hypothesis& hypothesis, const Query& observation,
                        const OracleOptions& options = {});

/// True iff some stable model agrees with every literal in `literals`.
bool extends_to_model(const StableModelSet& models, const std::vector<Literal>& literals);

}  // namespace gasp::oracle
