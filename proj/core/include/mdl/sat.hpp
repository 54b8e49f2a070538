#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdl/guard.hpp"

namespace mdl {

/// Total assignment over a constraint set's variable inventory, satisfying
/// every formula of the set it was produced from.
struct Model {
  BoolAssignment values;
};

/// Ordered, deduplicated conjunction of guard formulas plus the variable
/// inventory they range over. Insertion normalizes lightly (constant folding,
/// flattened and sorted And/Or operands); a formula equal to an existing one
/// after normalization is not inserted twice.
class BoolConstraintSet {
 public:
  /// Adds `formula` (normalized). Constant-true formulas are dropped,
  /// everything else is kept verbatim, including constant false.
  /// Returns true when the set changed.
  bool add(const Guard& formula, std::string provenance = {});

  /// Ensures `name` is part of the inventory even if no formula mentions it.
  void note_variable(const std::string& name);
  void note_variables(const std::vector<std::string>& names);

  const std::vector<Guard>& formulas() const { return formulas_; }
  const std::vector<std::string>& provenance() const { return provenance_; }
  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t size() const { return formulas_.size(); }
  bool contains(const Guard& formula) const;

 private:
  std::vector<Guard> formulas_;
  std::vector<std::string> provenance_;
  std::vector<std::string> variables_;
  std::map<std::string, std::size_t> variable_index_;
};

/// Clause database in DIMACS conventions: variables are 1-based, a literal is
/// a signed index. The first `named_count` variables correspond to the
/// constraint-set inventory in order; the rest are Tseitin auxiliaries.
struct Cnf {
  int variable_count = 0;
  int named_count = 0;
  std::vector<std::string> names;  // size named_count
  std::vector<std::vector<int>> clauses;
};

/// Equisatisfiable clause form. Formulas already in clausal shape translate
/// directly; auxiliary variables are introduced only for nested conjunctions
/// under disjunctions. Deterministic for a given set.
Cnf to_cnf(const BoolConstraintSet& set);

/// Complete search: a model iff one exists. Deterministic: branches on the
/// lowest unassigned variable index with false tried first, so the returned
/// model is the lexicographically least one (false < true). Assumptions
/// pre-assign named variables.
std::optional<Model> solve(const BoolConstraintSet& set, const BoolAssignment& assumptions = {});

/// True when both sets have exactly the same models over the union of their
/// inventories; decided with two entailment checks.
bool models_equivalent(const BoolConstraintSet& a, const BoolConstraintSet& b);

/// True when every model of `set` satisfies `formula`.
bool entails(const BoolConstraintSet& set, const Guard& formula);

void write_dimacs(const Cnf& cnf, std::ostream& out);

/// Sidecar name map: one `index name` line per named variable.
void write_dimacs_names(const Cnf& cnf, std::ostream& out);

}  // namespace mdl
