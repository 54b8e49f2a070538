#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mdl {

using BoolAssignment = std::map<std::string, bool>;

/// Boolean expression over b-variables. Nodes are immutable and shared, so
/// guards copy in O(1) and are safe to pass between threads.
class Guard {
 public:
  enum class Kind : unsigned char { Const, Var, Not, And, Or, Implies };

  /// Default guard is the constant true (the implicit guard of an element).
  Guard();

  static Guard constant(bool value);
  static Guard var(std::string name);
  static Guard negation(Guard operand);
  static Guard conjunction(Guard lhs, Guard rhs);
  static Guard disjunction(Guard lhs, Guard rhs);
  static Guard implication(Guard lhs, Guard rhs);

  /// n-ary helpers; empty input yields the neutral element.
  static Guard conjunction_of(const std::vector<Guard>& operands);
  static Guard disjunction_of(const std::vector<Guard>& operands);

  Kind kind() const;
  bool constant_value() const;          // Const only
  const std::string& variable() const;  // Var only
  Guard operand() const;                // Not only
  Guard left() const;                   // And/Or/Implies
  Guard right() const;

  bool is_constant() const { return kind() == Kind::Const; }
  bool is_true() const { return is_constant() && constant_value(); }
  bool is_false() const { return is_constant() && !constant_value(); }

  /// Standard Boolean semantics; Implies(a,b) = Or(Not(a), b).
  /// Throws MissingVariableError when a variable is unassigned.
  bool evaluate(const BoolAssignment& assignment) const;

  /// Simultaneous partial substitution of variables by constants, with
  /// constant folding; untouched variables remain symbolic.
  Guard substitute(const BoolAssignment& assignment) const;

  void collect_variables(std::vector<std::string>& order, std::set<std::string>& seen) const;
  std::vector<std::string> variables() const;

  /// Light normal form used for set identity: constants folded, double
  /// negation removed, And/Or chains flattened with operands deduplicated
  /// and sorted, x->x collapsed. Not a full simplifier.
  Guard normalized() const;

  std::string to_string() const;

  /// Total order over guards (used to sort commutative operands).
  static int compare(const Guard& a, const Guard& b);

  friend bool operator==(const Guard& a, const Guard& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Guard& a, const Guard& b) { return compare(a, b) != 0; }
  friend bool operator<(const Guard& a, const Guard& b) { return compare(a, b) < 0; }

  struct Node;  // opaque shared node

 private:
  explicit Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Free-function spelling used throughout the solver.
bool evaluate_guard(const Guard& guard, const BoolAssignment& assignment);

}  // namespace mdl
