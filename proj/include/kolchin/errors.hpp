#pragma once

#include <stdexcept>
#include <string>

namespace kolchin {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A path whose consecutive edges are not incident.
class MalformedPath : public Error {
 public:
  using Error::Error;
};

/// An operation was applied outside its domain (foreign edge, graph
/// mismatch, collapsing a loop, index out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A bounded search ran out of budget before finding what it was looking for.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

/// Data handed to an operation does not satisfy a structural property the
/// operation relies on. The message carries a witness.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

/// A consistency trap that should be unreachable.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kolchin
