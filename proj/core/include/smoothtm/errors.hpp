// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smoothtm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a value would violate a structural invariant (duplicate labels,
// partial functions, overlapping tracts, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Two objects that must agree on a base set, alphabet, or size do not.
class MismatchError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A cycle did not return to an encoding within its step budget.
class NonTerminationError : public Error {
 public:
  NonTerminationError(std::size_t steps, const std::string& what)
      : Error(what), steps_(steps) {}
  std::size_t steps() const noexcept { return steps_; }

 private:
  std::size_t steps_;
};

}  // namespace smoothtm
