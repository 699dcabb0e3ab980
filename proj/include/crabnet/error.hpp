#pragma once

#include <stdexcept>
#include <string>

namespace crabnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A message or marginal normalized to zero total mass.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (coincident points, time outside trace, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the search space exceeds its cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double size) : Error(what), size_(size) {}
  double size() const noexcept { return size_; }

 private:
  double size_;
};

}  // namespace crabnet
