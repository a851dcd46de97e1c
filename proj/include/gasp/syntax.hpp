#pragma once

// Abstract syntax of normal logic programs with negation as failure,
// comparison builtins and `#abducible` directives, plus the parser and
// the canonical printer.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gasp/decimal.hpp"
#include "gasp/error.hpp"

namespace gasp {

struct Symbol {
  std::string name;
  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Term = std::variant<Symbol, Decimal, Variable>;

inline bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }
inline bool is_number(const Term& t) { return std::holds_alternative<Decimal>(t); }
inline bool is_symbol(const Term& t) { return std::holds_alternative<Symbol>(t); }

std::size_t hash_term(const Term& t) noexcept;

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const noexcept { return args.size(); }
  /// Auxiliary atoms (leading underscore) are never shown to users.
  bool hidden() const noexcept { return !predicate.empty() && predicate.front() == '_'; }
  bool ground() const noexcept;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::weak_ordering operator<=>(const Atom& a, const Atom& b);
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class CompareOp { LessEq, GreaterEq, Less, Greater, Equal, NotEqual };

struct Builtin {
  Term left;
  CompareOp op = CompareOp::Equal;
  Term right;

  friend bool operator==(const Builtin&, const Builtin&) = default;
};

/// Evaluates a ground comparison. Order comparisons between non-numbers
/// are false; `=` and `\=` also work on symbols.
bool evaluate(const Builtin& b);

using BodyElement = std::variant<Literal, Builtin>;

struct SourcePosition {
  int line = 0;
  int column = 0;
};

struct Rule {
  std::optional<Atom> head;  ///< empty for a constraint
  std::vector<BodyElement> body;
  SourcePosition position;

  bool is_fact() const noexcept { return head.has_value() && body.empty(); }
  bool is_constraint() const noexcept { return !head.has_value(); }

  /// Structural equality; source positions are ignored.
  friend bool operator==(const Rule& a, const Rule& b) { return a.head == b.head && a.body == b.body; }
};

struct AbducibleDirective {
  Atom pattern;
  SourcePosition position;

  friend bool operator==(const AbducibleDirective& a, const AbducibleDirective& b) { return a.pattern == b.pattern; }
};

using Query = std::vector<Literal>;

struct Program {
  std::vector<Rule> rules;
  std::vector<AbducibleDirective> abducibles;
  std::vector<Query> queries;

  friend bool operator==(const Program&, const Program&) = default;
};

struct ParseOptions {
  /// Permits predicates with the reserved abduction prefixes, so expanded
  /// programs can be printed and read back.
  bool allow_reserved = false;
};

/// Reserved predicate prefixes used by the abducible expansion.
inline constexpr std::string_view kNegPrefix = "_neg_";
inline constexpr std::string_view kAbdPrefix = "_abd_";
inline constexpr std::string_view kNegAbdPrefix = "_negabd_";

bool is_reserved_predicate(std::string_view predicate) noexcept;

Program parse_program(std::string_view text, const ParseOptions& options = {});

/// Comma-separated literals, optionally prefixed by `?-` or `:-` and
/// optionally terminated by `.`.
Query parse_query(std::string_view text);

Atom parse_atom(std::string_view text);

/// Throws SafetyError when `rule` is unsafe.
void check_safety(const Rule& rule);

/// Ground literals in the order they entered a partial answer set.
struct PartialAnswerSet {
  std::vector<Literal> literals;

  bool contains(const Literal& l) const;
  std::vector<Atom> positive() const;
  std::vector<Atom> negative() const;
  /// Visible literals in canonical order, for set comparison.
  std::vector<Literal> visible_sorted() const;
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Builtin& b);
std::string to_string(CompareOp op);
std::string to_string(const Rule& r);
std::string to_string(const Program& p);

/// `{ q, not p }`: visible literals in derivation order.
std::string render(const PartialAnswerSet& s);
std::string render(const Literal& l);

/// Renders an arbitrary literal sequence as `{ a, not b }`, hiding
/// auxiliary atoms.
std::string render_set(const std::vector<Literal>& literals);

}  // namespace gasp
