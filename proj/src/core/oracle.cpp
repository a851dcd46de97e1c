#include "gasp/oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace gasp::oracle {

namespace {

using Bits = std::vector<bool>;

/// Least model of the reduct of `gp` with respect to `candidate`; returns
/// false if a constraint body holds in `candidate`.
bool is_stable(const GroundProgram& gp, const Bits& candidate) {
  const std::size_t n = gp.atom_count();
  // Constraints: a stable model may not satisfy any constraint body.
  for (const GroundRule& r : gp.rules()) {
    if (r.head) continue;
    bool body = std::all_of(r.body.begin(), r.body.end(),
                            [&](const GroundLiteral& l) { return candidate[l.atom] != l.negated; });
    if (body) return false;
  }
  Bits least(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const GroundRule& r : gp.rules()) {
      if (!r.head || least[*r.head]) continue;
      bool fires = true;
      for (const GroundLiteral& l : r.body) {
        // Reduct: drop rules with a negated atom in the candidate, drop
        // remaining negative literals.
        if (l.negated ? candidate[l.atom] : !least[l.atom]) {
          fires = false;
          break;
        }
      }
      if (fires) {
        least[*r.head] = true;
        changed = true;
      }
    }
  }
  return least == candidate;
}

}  // namespace

StableModelSet enumerate_stable_models(const GroundProgram& gp, const OracleOptions& options) {
  const std::size_t n = gp.atom_count();
  if (n > options.max_atoms) throw BaseTooLarge(n, options.max_atoms);
  StableModelSet out;
  Bits candidate(n, false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) candidate[i] = (mask >> i) & 1u;
    if (!is_stable(gp, candidate)) continue;
    std::vector<Atom> model;
    for (std::size_t i = 0; i < n; ++i)
      if (candidate[i]) model.push_back(gp.atom(static_cast<AtomId>(i)));
    std::sort(model.begin(), model.end());
    out.models.push_back(std::move(model));
  }
  std::sort(out.models.begin(), out.models.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return out;
}

StableModelSet enumerate_stable_models(const Program& program, const OracleOptions& options) {
  return enumerate_stable_models(ground(program), options);
}

bool extends_to_model(const StableModelSet& models, const std::vector<Literal>& literals) {
  return std::any_of(models.models.begin(), models.models.end(), [&](const std::vector<Atom>& m) {
    return std::all_of(literals.begin(), literals.end(), [&](const Literal& l) {
      bool in = std::binary_search(m.begin(), m.end(), l.atom);
      return in != l.negated;
    });
  });
}

bool verify_explanation(const Program& theory, const Hypothesis& hypothesis, const Query& observation,
                        const OracleOptions& options) {
  Program p = theory;
  p.abducibles.clear();
  p.queries.clear();
  for (const Atom& a : hypothesis.assumed_true) p.rules.push_back(Rule{a, {}, {}});
  StableModelSet models = enumerate_stable_models(p, options);
  std::vector<Literal> required(observation.begin(), observation.end());
  for (const Atom& a : hypothesis.assumed_false) required.push_back({a, true});
  return extends_to_model(models, required);
}

}  // namespace gasp::oracle
