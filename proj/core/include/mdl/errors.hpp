#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdl/source.hpp"

namespace mdl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error with the offending span and the token classes that would
/// have been accepted at that point.
struct ParseError : Error {
  ParseError(std::string message, SourceSpan where, std::vector<std::string> expect = {})
      : Error(where.to_string() + ": " + message), span(std::move(where)), expected(std::move(expect)) {}
  SourceSpan span;
  std::vector<std::string> expected;
};

/// A term variable was used (or bound) against its coercion sort.
struct SortError : Error {
  explicit SortError(const std::string& message, SourceSpan where = {})
      : Error(where.known() ? where.to_string() + ": " + message : message), span(std::move(where)) {}
  SourceSpan span;
};

struct NotGroundError : Error {
  using Error::Error;
};

struct MissingVariableError : Error {
  explicit MissingVariableError(const std::string& variable)
      : Error("guard variable '" + variable + "' has no assigned value"), name(variable) {}
  std::string name;
};

struct IllFormedSwitchError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct IterationLimitError : Error {
  using Error::Error;
};

/// The solver produced a candidate that fails the final seniority audit.
/// This is a solver bug, never a property of the input.
struct VerificationError : Error {
  using Error::Error;
};

struct DanglingChannelError : Error {
  using Error::Error;
};

struct RoleMismatchError : Error {
  using Error::Error;
};

}  // namespace mdl
