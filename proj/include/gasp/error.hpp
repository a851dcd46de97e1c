#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gasp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A variable occurs in a head, a negated literal or a comparison without
/// being bound by a positive body literal.
class SafetyError : public Error {
 public:
  SafetyError(const std::string& variable, const std::string& rule, int line)
      : Error("line " + std::to_string(line) + ": unsafe variable " + variable + " in rule `" + rule + "`"),
        variable_(variable),
        rule_(rule) {}

  const std::string& variable() const noexcept { return variable_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string variable_;
  std::string rule_;
};

class GroundingExplosion : public Error {
 public:
  explicit GroundingExplosion(std::size_t limit)
      : Error("grounding exceeds " + std::to_string(limit) + " rule instances") {}
};

class DepthLimitExceeded : public Error {
 public:
  explicit DepthLimitExceeded(std::size_t limit)
      : Error("derivation depth exceeds " + std::to_string(limit) + " frames") {}
};

class AbducibleConflict : public Error {
 public:
  using Error::Error;
};

class BaseTooLarge : public Error {
 public:
  BaseTooLarge(std::size_t atoms, std::size_t limit)
      : Error("Herbrand base has " + std::to_string(atoms) + " atoms, oracle limit is " + std::to_string(limit)) {}
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(const std::string& atom) : Error("atom not in vocabulary: " + atom) {}
};

/// Malformed query (e.g. a variable only occurring under negation).
class QueryError : public Error {
 public:
  using Error::Error;
};

/// Patient profile content that violates the profile invariants.
class ProfileError : public Error {
 public:
  using Error::Error;
};

}  // namespace gasp
