#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model text. Carries a 1-based line/column position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A name (variable, state, gate, event) that does not resolve.
class UnresolvedName : public Error {
 public:
  using Error::Error;
};

/// A query that is malformed independently of the model (e.g. the target
/// is also observed).
class InvalidQuery : public Error {
 public:
  using Error::Error;
};

/// Structural problem with an otherwise resolvable model or value.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Evidence with zero probability under the model.
class ContradictoryEvidence : public Error {
 public:
  using Error::Error;
};

/// An exact enumeration would exceed its configured size limit.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Mass functions defined over different frames of discernment.
class FrameMismatch : public Error {
 public:
  using Error::Error;
};

/// Dempster combination of fully conflicting evidence.
class TotalConflict : public Error {
 public:
  using Error::Error;
};

}  // namespace ucm
