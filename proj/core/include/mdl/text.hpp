#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mdl/guard.hpp"
#include "mdl/source.hpp"
#include "mdl/term.hpp"

namespace mdl {

/// One `lhs <= rhs ;` item of a constraint file.
struct ParsedConstraint {
  Term lhs;
  Term rhs;
  SourceSpan span;
};

/// Parses a single term (the whole input). Throws ParseError / SortError.
Term parse_term(std::string_view source, std::string filename = "<memory>");

/// Parses a guard expression (the whole input).
Guard parse_guard(std::string_view source, std::string filename = "<memory>");

/// Parses a `.mdlc` constraint file: `term <= term ;` items with `//`
/// comments. Rejects ill-sorted tails (an up-variable in a record tail or a
/// down-variable in a choice tail) at the syntax level.
std::vector<ParsedConstraint> parse_constraint_file(std::string_view source, std::string filename = "<memory>");

/// Canonical layout: single space after commas and element colons, guards
/// printed only when not constant true, elements in source order.
/// parse_term(print_term(t)) is structurally equal to t.
std::string print_term(const Term& term);

std::string print_guard(const Guard& guard);

}  // namespace mdl
