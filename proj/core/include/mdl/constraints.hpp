#pragma once

#include <string>
#include <vector>

#include "mdl/guard.hpp"
#include "mdl/term.hpp"

namespace mdl {

/// Generated Boolean formula together with the position that produced it.
struct GeneratedFormula {
  Guard formula;
  std::string provenance;
};

/// Well-formedness constraints for a semi-ground term: mutual exclusion of
/// duplicate labels, switch coverage and exclusivity, and guarded recursion
/// into payloads. Symbols contribute nothing; an unresolved tail variable
/// contributes nothing. Output is deduplicated and deterministic.
std::vector<Guard> wfc(const Term& term);

/// Seniority constraints for `lhs <= rhs` over semi-ground terms.
///
/// Per right record element (dually per left choice element) with matching
/// labels on the other side this emits the payload implications
/// `(g1 && g2) -> SC(payloads)` and the existence implication
/// `g2 -> (g1_a || g1_b || ...)` over all same-label partners; an element
/// with no partner degenerates to `!g2`. Tuples recurse pointwise at equal
/// arity, switches distribute their guards as implications, equal symbols
/// are vacuous and every remaining pair yields `false`.
std::vector<Guard> sc(const Term& lhs, const Term& rhs);

/// Same generators with per-formula provenance, prefixed by `origin`.
std::vector<GeneratedFormula> wfc_provenanced(const Term& term, const std::string& origin);
std::vector<GeneratedFormula> sc_provenanced(const Term& lhs, const Term& rhs, const std::string& origin);

}  // namespace mdl
