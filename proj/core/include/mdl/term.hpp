#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdl/guard.hpp"
#include "mdl/source.hpp"

namespace mdl {

enum class TermKind : unsigned char { Symbol, Tuple, Record, Choice, Switch, DownVar, UpVar };

class Term;

/// Guarded, labelled member of a record or choice.
struct Element {
  std::string label;
  Guard guard;  // defaults to the constant true
  // Defined out of line because Element is recursive through Term.
  Element(std::string label, Guard guard, Term term);
  Element(std::string label, Term term);
  std::shared_ptr<const Term> term_ptr;
  const Term& term() const { return *term_ptr; }
};

struct SwitchAlt {
  SwitchAlt(Guard guard, Term term);
  Guard guard;
  std::shared_ptr<const Term> term_ptr;
  const Term& term() const { return *term_ptr; }
};

/// MDL term. Immutable value type with shared structure; copies are cheap.
class Term {
 public:
  /// Default term is nil, the empty record.
  Term();

  static Term symbol(std::string name);
  static Term tuple(std::vector<Term> items);  // arity >= 1
  static Term record(std::vector<Element> elements, std::optional<std::string> tail = std::nullopt);
  static Term choice(std::vector<Element> elements, std::optional<std::string> tail = std::nullopt);
  static Term switch_of(std::vector<SwitchAlt> alternatives);  // non-empty
  static Term down_var(std::string name);
  static Term up_var(std::string name);
  static Term nil() { return record({}); }
  static Term none() { return choice({}); }

  TermKind kind() const;
  const std::string& name() const;                  // Symbol, DownVar, UpVar
  const std::vector<Term>& items() const;           // Tuple
  const std::vector<Element>& elements() const;     // Record, Choice
  const std::optional<std::string>& tail() const;   // Record, Choice
  const std::vector<SwitchAlt>& alternatives() const;  // Switch

  bool is(TermKind k) const { return kind() == k; }
  bool is_nil() const;   // record, no elements, no tail
  bool is_none() const;  // choice, no elements, no tail

  /// Category queries per the seniority semilattices. A switch belongs to
  /// neither category until canonicalized.
  bool is_down_coerced() const;  // symbol | tuple | record | down variable
  bool is_up_coerced() const;    // choice | up variable

  const SourceSpan& span() const;
  Term with_span(SourceSpan span) const;

  /// Structural equality; spans are ignored.
  friend bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
  static int compare(const Term& a, const Term& b);

  struct Node;  // opaque shared node

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Ordered variable sets of a term or constraint set: b-variables, then
/// down-coerced and up-coerced t-variables, each in first-occurrence
/// (preorder) order. The three namespaces are disjoint.
struct VariableInventory {
  std::vector<std::string> bvars;
  std::vector<std::string> downvars;
  std::vector<std::string> upvars;

  bool empty() const { return bvars.empty() && downvars.empty() && upvars.empty(); }
  void merge_from(const Term& term);

  std::optional<std::size_t> bvar_index(const std::string& name) const;
  std::optional<std::size_t> downvar_index(const std::string& name) const;
  std::optional<std::size_t> upvar_index(const std::string& name) const;

 private:
  std::map<std::string, std::size_t> seen_b_, seen_down_, seen_up_;
};

VariableInventory collect_variables(const Term& term);

bool is_ground(const Term& term);       // no variables at all
bool is_semi_ground(const Term& term);  // no t-variables; b-variables allowed

/// Simultaneous replacement of b-variables by constants and t-variables by
/// terms. Down and up maps are keyed in their own namespaces. Replacing a
/// record/choice tail by a collection splices its elements into the host and
/// adopts its tail. Throws SortError on ill-sorted replacements.
struct TermSubstitution {
  BoolAssignment bools;
  std::map<std::string, Term> down;
  std::map<std::string, Term> up;
};

Term substitute(const Term& term, const TermSubstitution& subst);

/// Canonical form: false-guarded elements dropped, true guards implicit,
/// switches replaced by their unique true alternative. Guards must be
/// constant after applying `assignment` (when given). Idempotent.
/// Throws IllFormedSwitchError when a switch has zero or multiple true
/// guards, MissingVariableError when a guard stays symbolic.
Term canonicalize(const Term& term);
Term canonicalize(const Term& term, const BoolAssignment& assignment);

/// Well-formedness per the recursive definition on ground terms: duplicate
/// labels only under mutually exclusive guards, switches with exactly one
/// true alternative. Throws NotGroundError on non-ground input.
bool is_well_formed(const Term& term);

}  // namespace mdl
