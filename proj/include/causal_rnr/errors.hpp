#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace causal_rnr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A relation expected to be a partial order contains a cycle.
class CyclicInput : public Error {
 public:
  using Error::Error;
};

/// A view's operation set differs from own ops plus all writes.
class UniverseMismatch : public Error {
 public:
  using Error::Error;
};

class NotStronglyCausal : public Error {
 public:
  using Error::Error;
};

class MalformedStream : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// A postcondition the algorithms guarantee did not hold. Always a bug.
class InternalInvariant : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search hit its node or operation cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t explored)
      : Error(what + " (explored " + std::to_string(explored) + " nodes)"),
        explored_(explored) {}

  std::uint64_t explored() const noexcept { return explored_; }

 private:
  std::uint64_t explored_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Input parsed but describes an ill-formed model value.
class SemanticError : public Error {
 public:
  using Error::Error;
};

}  // namespace causal_rnr
