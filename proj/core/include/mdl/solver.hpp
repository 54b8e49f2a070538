#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdl/lattice.hpp"
#include "mdl/sat.hpp"
#include "mdl/term.hpp"

namespace mdl {

/// One seniority constraint lhs <= rhs with its provenance (file position or
/// channel id).
struct SeniorityConstraint {
  Term lhs;
  Term rhs;
  std::string origin;
};

/// Ordered constraint collection. Insertion rejects pairs whose top-level
/// sorts cannot be reconciled when a variable is involved (an up-coerced
/// variable against a record, and so on); structurally unrelated ground
/// pairs are kept and simply unsatisfiable.
class ConstraintSet {
 public:
  void add(SeniorityConstraint constraint);  // throws SortError
  const std::vector<SeniorityConstraint>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  /// First-occurrence inventory over all constraint sides, in order.
  VariableInventory inventory() const;

 private:
  std::vector<SeniorityConstraint> items_;
};

struct Solution {
  BoolAssignment bvars;
  std::map<std::string, Term> down_vars;
  std::map<std::string, Term> up_vars;
};

struct SolveStats {
  int iterations = 0;
  int sat_queries = 0;
  int models_tried = 0;
  bool exhaustive_confirmation = false;
};

struct SolveResult {
  std::optional<Solution> solution;
  std::vector<std::string> implicated;  // provenance of the blocking constraints on Unsat
  SolveStats stats;
  BoolConstraintSet adjunct;  // final adjunct Boolean set (empty for ground runs)
  bool satisfiable() const { return solution.has_value(); }
};

struct SolveOptions {
  int max_iterations = 10000;
  bool audit = true;
  std::function<void(int iteration, const ApproximationVector&)> on_iteration;
};

/// Approximating function for a single constraint: refines the incoming
/// approximation so the constraint can still be satisfied, collapsing the
/// whole vector when it cannot. Elements with constant-false guards are
/// absent; other guarded elements are treated as present, but an
/// impossibility under a non-constant guard leaves the vector untouched (the
/// Boolean side owns that case).
ApproximationVector af(const SeniorityConstraint& constraint, const ApproximationVector& approx);

/// Left-to-right sequential composition of af over the whole set.
ApproximationVector af_c(const ConstraintSet& constraints, const ApproximationVector& approx);

/// Fixed-point algorithm for constraint sets without b-variables. Returns
/// Unsat exactly when the fixed point collapsed. The returned assignment is
/// re-verified against every constraint before returning.
SolveResult solve_ground(const ConstraintSet& constraints, const SolveOptions& options = {});

/// Full solver: iterates the approximating function while growing the
/// adjunct Boolean constraint set (well-formedness + seniority formulas over
/// the substituted constraint sides), then picks the deterministic first
/// model, verifies it against the ground semantics and returns the
/// instantiated variables. Models that fail verification are blocked and the
/// search continues; with at most 16 b-variables an UNSAT claim from the
/// Boolean side is confirmed exhaustively.
SolveResult solve(const ConstraintSet& constraints, const SolveOptions& options = {});

/// True when `solution` makes every constraint well-formed and senior after
/// substitution and canonicalization.
bool verify_solution(const ConstraintSet& constraints, const Solution& solution);

}  // namespace mdl
