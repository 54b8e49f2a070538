#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mdl/term.hpp"

namespace mdl {

/// Seniority t1 <= t2 on ground, well-formed, canonical terms:
///   none <= any choice; symbol/tuple/record <= nil; reflexivity;
///   tuples pointwise at equal arity; records need every right label in the
///   left with junior payloads (width-covariant); choices dually
///   (width-contravariant). Cross-category pairs are unrelated.
bool is_senior(const Term& junior, const Term& senior);

/// Slot value in an approximation vector: a term extended with the bottom
/// element of the meet semilattice (down positions) or the top element of
/// the join semilattice (up positions).
class LatticePoint {
 public:
  enum class Kind : unsigned char { Bottom, Value, Top };

  LatticePoint() : kind_(Kind::Value) {}
  static LatticePoint bottom() { return LatticePoint(Kind::Bottom); }
  static LatticePoint top() { return LatticePoint(Kind::Top); }
  static LatticePoint value(Term term) {
    LatticePoint p(Kind::Value);
    p.term_ = std::move(term);
    return p;
  }

  Kind kind() const { return kind_; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  bool is_top() const { return kind_ == Kind::Top; }
  bool is_value() const { return kind_ == Kind::Value; }
  const Term& term() const { return term_; }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Value || a.term_ == b.term_);
  }
  friend bool operator!=(const LatticePoint& a, const LatticePoint& b) { return !(a == b); }

 private:
  explicit LatticePoint(Kind k) : kind_(k) {}
  Kind kind_;
  Term term_;  // nil placeholder for sentinels
};

/// Greatest lower bound in the down-coerced semilattice. nil is the identity
/// and Bottom is absorbing. Accepts semi-ground inputs: same-label elements
/// merge with disjoined guards. Throws SortError on up-coerced input.
LatticePoint meet(const LatticePoint& a, const LatticePoint& b);

/// Least upper bound in the up-coerced semilattice. none is the identity and
/// Top is absorbing. Throws SortError on non-choice input.
LatticePoint join(const LatticePoint& a, const LatticePoint& b);

/// Point order: Bottom below every down point, Top above every up point,
/// values compared with is_senior. Non-ground values fall back to a
/// guard-blind structural comparison.
bool point_leq(const LatticePoint& a, const LatticePoint& b);

/// Paired approximation for the down-coerced and up-coerced t-variables of a
/// constraint set, indexed by VariableInventory order. A failed
/// approximation collapses the whole vector to (all-Bottom, all-Top).
struct ApproximationVector {
  VariableInventory vars;
  std::vector<LatticePoint> down;
  std::vector<LatticePoint> up;
  // Set when some constraint admits no approximation at all; kept separate
  // from the slots so a collapse is representable when both vectors are
  // empty.
  bool failed = false;

  static ApproximationVector initial(VariableInventory inventory);

  bool collapsed() const { return failed; }
  void collapse();

  friend bool operator==(const ApproximationVector& a, const ApproximationVector& b) {
    return a.failed == b.failed && a.down == b.down && a.up == b.up;
  }
  friend bool operator!=(const ApproximationVector& a, const ApproximationVector& b) { return !(a == b); }
};

/// Pointwise meet of down-slot vectors / join of up-slot vectors.
/// Throws LengthMismatchError on inconsistent lengths.
std::vector<LatticePoint> vector_meet(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b);
std::vector<LatticePoint> vector_join(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b);

/// Componentwise combination used by the approximating function and the
/// homomorphism law: down slots meet, up slots join.
ApproximationVector vector_combine(const ApproximationVector& a, const ApproximationVector& b);

/// True when every down pair and every up pair of slots is related.
bool vector_leq(const ApproximationVector& a, const ApproximationVector& b);

}  // namespace mdl
