#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gasp/syntax.hpp"

namespace gasp {

using AtomId = std::uint32_t;

struct GroundLiteral {
  AtomId atom = 0;
  bool negated = false;

  friend bool operator==(const GroundLiteral&, const GroundLiteral&) = default;
};

struct GroundRule {
  std::optional<AtomId> head;  ///< empty for a constraint
  std::vector<GroundLiteral> body;

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

/// Variable-free program over interned atoms. Builtins have been
/// evaluated away; rule order follows the source program.
class GroundProgram {
 public:
  GroundProgram() = default;

  /// Interns `atom` (which must be ground) and returns its id.
  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const Atom& atom) const;

  void add_rule(GroundRule rule);

  const Atom& atom(AtomId id) const { return atoms_[id]; }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::span<const Atom> atoms() const noexcept { return atoms_; }

  std::span<const GroundRule> rules() const noexcept { return rules_; }
  const GroundRule& rule(std::size_t i) const { return rules_[i]; }

  /// Indices of the rules whose head is `id`, in program order.
  std::span<const std::uint32_t> rules_for(AtomId id) const;

  /// Non-ground view, for printing and for the oracle's tests.
  Program to_program() const;

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<Atom, AtomId, AtomHash> index_;
  std::vector<GroundRule> rules_;
  std::vector<std::vector<std::uint32_t>> defining_;
};

struct GroundOptions {
  std::size_t max_instances = 1'000'000;
};

/// Constants and numbers occurring in the program text, in first-seen order.
std::vector<Term> herbrand_universe(const Program& program);

/// Bottom-up instantiation. Rule instances whose positive body cannot be
/// derived, or whose comparisons are false, are dropped. Variables left
/// unbound by the positive body (only produced by abducible expansion)
/// range over the Herbrand universe.
GroundProgram ground(const Program& program, const GroundOptions& options = {});

}  // namespace gasp
