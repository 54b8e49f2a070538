#include "mdl/solver.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

#include "mdl/constraints.hpp"
#include "mdl/errors.hpp"

namespace mdl {

namespace {

bool contains_switch(const Term& t) {
  switch (t.kind()) {
    case TermKind::Switch:
      return true;
    case TermKind::Tuple:
      return std::any_of(t.items().begin(), t.items().end(), contains_switch);
    case TermKind::Record:
    case TermKind::Choice:
      return std::any_of(t.elements().begin(), t.elements().end(),
                         [](const Element& e) { return contains_switch(e.term()); });
    default:
      return false;
  }
}

enum class Presence { Absent, Soft, Hard };

using PresenceFn = std::function<Presence(const Guard&)>;

Presence constant_presence(const Guard& g) {
  if (g.is_false()) return Presence::Absent;
  if (g.is_true()) return Presence::Hard;
  return Presence::Soft;
}

int term_depth(const Term& t) {
  switch (t.kind()) {
    case TermKind::Tuple: {
      int inner = 0;
      for (const Term& i : t.items()) inner = std::max(inner, term_depth(i));
      return inner + 1;
    }
    case TermKind::Record:
    case TermKind::Choice: {
      int inner = 0;
      for (const Element& e : t.elements()) inner = std::max(inner, term_depth(e.term()));
      return inner + 1;
    }
    case TermKind::Switch: {
      int inner = 0;
      for (const SwitchAlt& a : t.alternatives()) inner = std::max(inner, term_depth(a.term()));
      return inner + 1;
    }
    default:
      return 1;
  }
}

struct AfState {
  ApproximationVector vec;
  const PresenceFn* presence = nullptr;
  std::string origin;
  std::vector<std::string>* notes = nullptr;
  // Cyclic tail dependencies can demand terms of unbounded depth; any slot
  // value deeper than this has no finite instantiation. Sized from the
  // constraint set by depth_bound_for().
  int depth_bound = 1 << 20;

  Presence presence_of(const Guard& g) const { return (*presence)(g); }

  bool too_deep(const LatticePoint& p) const { return p.is_value() && term_depth(p.term()) > depth_bound; }

  void fail(const std::string& note) {
    if (vec.collapsed()) return;
    vec.collapse();
    if (notes != nullptr) notes->push_back(origin.empty() ? note : origin + ": " + note);
  }
};

int depth_bound_for(const ConstraintSet& constraints) {
  int base = 1;
  for (const SeniorityConstraint& c : constraints.items()) {
    base = std::max(base, std::max(term_depth(c.lhs), term_depth(c.rhs)));
  }
  const VariableInventory inv = constraints.inventory();
  const int vars = static_cast<int>(inv.downvars.size() + inv.upvars.size());
  return base * (vars + 2) + 8;
}

std::size_t down_slot(const AfState& st, const std::string& name) {
  auto idx = st.vec.vars.downvar_index(name);
  if (!idx) throw LengthMismatchError("down-coerced variable '" + name + "' is not in the approximation inventory");
  return *idx;
}

std::size_t up_slot(const AfState& st, const std::string& name) {
  auto idx = st.vec.vars.upvar_index(name);
  if (!idx) throw LengthMismatchError("up-coerced variable '" + name + "' is not in the approximation inventory");
  return *idx;
}

// Replaces every t-variable (including tails) by its current slot value.
// nullopt when a referenced slot holds a sentinel.
std::optional<Term> substitute_full(const Term& t, const ApproximationVector& vec) {
  TermSubstitution subst;
  for (std::size_t i = 0; i < vec.vars.downvars.size(); ++i) {
    if (vec.down[i].is_value()) subst.down.emplace(vec.vars.downvars[i], vec.down[i].term());
  }
  for (std::size_t i = 0; i < vec.vars.upvars.size(); ++i) {
    if (vec.up[i].is_value()) subst.up.emplace(vec.vars.upvars[i], vec.up[i].term());
  }
  try {
    Term out = substitute(t, subst);
    VariableInventory rest = collect_variables(out);
    if (!rest.downvars.empty() || !rest.upvars.empty()) return std::nullopt;
    return out;
  } catch (const SortError&) {
    // The current slot value cannot instantiate this position (e.g. a tail
    // variable whose approximation is not a collection of the host's kind).
    return std::nullopt;
  }
}

void af_rec(const Term& t1, const Term& t2, AfState& st, bool hard);

// t2 is a record; t1 is a symbol, tuple or record (treated as an element-less
// record when not a record).
void record_case(const Term& t1, const Term& t2, AfState& st, bool hard) {
  if (t1.kind() == TermKind::Record && t1.tail()) {
    const LatticePoint& slot = st.vec.down[down_slot(st, *t1.tail())];
    if (!slot.is_value() || slot.term().kind() != TermKind::Record) {
      if (hard) st.fail("tail variable '" + *t1.tail() + "' cannot hold a record");
      return;
    }
  }
  std::vector<Element> rhs_elems = t2.elements();
  if (t2.tail()) {
    const LatticePoint& slot = st.vec.down[down_slot(st, *t2.tail())];
    if (!slot.is_value() || slot.term().kind() != TermKind::Record) {
      if (hard) st.fail("right-hand record tail has no admissible record value");
      return;
    }
    for (const Element& e : slot.term().elements()) rhs_elems.push_back(e);
  }
  for (const Element& e2 : rhs_elems) {
    const Presence p2 = st.presence_of(e2.guard);
    if (p2 == Presence::Absent) continue;
    const bool hard_here = hard && p2 == Presence::Hard;
    bool matched = false;
    if (t1.kind() == TermKind::Record) {
      for (const Element& e1 : t1.elements()) {
        if (e1.label != e2.label) continue;
        const Presence p1 = st.presence_of(e1.guard);
        if (p1 == Presence::Absent) continue;
        matched = true;
        af_rec(e1.term(), e2.term(), st, hard_here && p1 == Presence::Hard);
        if (st.vec.collapsed()) return;
      }
    }
    if (matched) continue;
    if (t1.kind() == TermKind::Record && t1.tail()) {
      // Flow inheritance: the missing element is demanded from the left tail.
      auto payload = substitute_full(e2.term(), st.vec);
      if (!payload) {
        if (hard_here) st.fail("cannot instantiate payload for label '" + e2.label + "'");
        continue;
      }
      LatticePoint& slot = st.vec.down[down_slot(st, *t1.tail())];
      LatticePoint met = meet(slot, LatticePoint::value(Term::record({Element(e2.label, e2.guard, *payload)})));
      if (met.is_bottom() || st.too_deep(met)) {
        if (hard_here) st.fail("tail variable '" + *t1.tail() + "' cannot absorb label '" + e2.label + "'");
        continue;  // leave the slot; the Boolean side carries the conflict
      }
      slot = std::move(met);
    } else if (hard_here) {
      st.fail("record requires label '" + e2.label + "' that the left side cannot supply");
      return;
    }
  }
}

// Both sides are choices.
void choice_case(const Term& t1, const Term& t2, AfState& st, bool hard) {
  std::vector<Element> lhs_elems = t1.elements();
  if (t1.tail()) {
    const LatticePoint& slot = st.vec.up[up_slot(st, *t1.tail())];
    if (!slot.is_value() || slot.term().kind() != TermKind::Choice) {
      if (hard) st.fail("left-hand choice tail has no admissible choice value");
      return;
    }
    for (const Element& e : slot.term().elements()) lhs_elems.push_back(e);
  }
  for (const Element& e1 : lhs_elems) {
    const Presence p1 = st.presence_of(e1.guard);
    if (p1 == Presence::Absent) continue;
    const bool hard_here = hard && p1 == Presence::Hard;
    bool matched = false;
    for (const Element& e2 : t2.elements()) {
      if (e2.label != e1.label) continue;
      const Presence p2 = st.presence_of(e2.guard);
      if (p2 == Presence::Absent) continue;
      matched = true;
      af_rec(e1.term(), e2.term(), st, hard_here && p2 == Presence::Hard);
      if (st.vec.collapsed()) return;
    }
    if (matched) continue;
    if (t2.tail()) {
      auto payload = substitute_full(e1.term(), st.vec);
      if (!payload) {
        if (hard_here) st.fail("cannot instantiate payload for variant '" + e1.label + "'");
        continue;
      }
      LatticePoint& slot = st.vec.up[up_slot(st, *t2.tail())];
      LatticePoint joined = join(slot, LatticePoint::value(Term::choice({Element(e1.label, e1.guard, *payload)})));
      if (joined.is_top() || st.too_deep(joined)) {
        if (hard_here) st.fail("tail variable '" + *t2.tail() + "' cannot absorb variant '" + e1.label + "'");
        continue;
      }
      slot = std::move(joined);
    } else if (hard_here) {
      st.fail("choice emits variant '" + e1.label + "' that the right side cannot accept");
      return;
    }
  }
}

void af_rec(const Term& t1, const Term& t2, AfState& st, bool hard) {
  if (st.vec.collapsed()) return;

  if (t1.kind() == TermKind::Switch) {
    for (const SwitchAlt& alt : t1.alternatives()) {
      const Presence p = st.presence_of(alt.guard);
      if (p == Presence::Absent) continue;
      af_rec(alt.term(), t2, st, hard && p == Presence::Hard);
      if (st.vec.collapsed()) return;
    }
    return;
  }
  if (t2.kind() == TermKind::Switch) {
    for (const SwitchAlt& alt : t2.alternatives()) {
      const Presence p = st.presence_of(alt.guard);
      if (p == Presence::Absent) continue;
      af_rec(t1, alt.term(), st, hard && p == Presence::Hard);
      if (st.vec.collapsed()) return;
    }
    return;
  }

  // t <= $v : refine against the variable's current approximation.
  if (t2.kind() == TermKind::DownVar) {
    if (!t1.is_down_coerced()) {
      throw SortError("constraint relates '" + t2.name() + "' (down-coerced) to an up-coerced term", t1.span());
    }
    const LatticePoint& slot = st.vec.down[down_slot(st, t2.name())];
    if (!slot.is_value()) {
      if (hard) st.fail("variable '" + t2.name() + "' has no admissible value");
      return;
    }
    af_rec(t1, slot.term(), st, hard);
    return;
  }
  // ^u <= t : dual.
  if (t1.kind() == TermKind::UpVar) {
    if (!t2.is_up_coerced()) {
      throw SortError("constraint relates '" + t1.name() + "' (up-coerced) to a down-coerced term", t2.span());
    }
    const LatticePoint& slot = st.vec.up[up_slot(st, t1.name())];
    if (!slot.is_value()) {
      if (hard) st.fail("variable '" + t1.name() + "' has no admissible value");
      return;
    }
    af_rec(slot.term(), t2, st, hard);
    return;
  }
  // $v <= t : descend in the meet semilattice.
  if (t1.kind() == TermKind::DownVar) {
    if (!t2.is_down_coerced()) {
      throw SortError("constraint relates '" + t1.name() + "' (down-coerced) to an up-coerced term", t2.span());
    }
    auto ground = substitute_full(t2, st.vec);
    if (!ground) {
      if (hard) st.fail("right-hand side of '" + t1.name() + "' has no admissible value");
      return;
    }
    LatticePoint& slot = st.vec.down[down_slot(st, t1.name())];
    LatticePoint met = meet(slot, LatticePoint::value(std::move(*ground)));
    if (met.is_bottom() || st.too_deep(met)) {
      if (hard) st.fail("variable '" + t1.name() + "' has no value satisfying all constraints");
      return;
    }
    slot = std::move(met);
    return;
  }
  // t <= ^u : ascend in the join semilattice.
  if (t2.kind() == TermKind::UpVar) {
    if (!t1.is_up_coerced()) {
      throw SortError("constraint relates '" + t2.name() + "' (up-coerced) to a down-coerced term", t1.span());
    }
    auto ground = substitute_full(t1, st.vec);
    if (!ground) {
      if (hard) st.fail("left-hand side of '" + t2.name() + "' has no admissible value");
      return;
    }
    LatticePoint& slot = st.vec.up[up_slot(st, t2.name())];
    LatticePoint joined = join(slot, LatticePoint::value(std::move(*ground)));
    if (joined.is_top() || st.too_deep(joined)) {
      if (hard) st.fail("variable '" + t2.name() + "' has no value satisfying all constraints");
      return;
    }
    slot = std::move(joined);
    return;
  }

  switch (t1.kind()) {
    case TermKind::Symbol:
      if (t2.kind() == TermKind::Symbol) {
        if (t1.name() != t2.name() && hard) st.fail("symbols '" + t1.name() + "' and '" + t2.name() + "' differ");
        if (t1.name() != t2.name()) return;
        return;
      }
      break;
    case TermKind::Tuple:
      if (t2.kind() == TermKind::Tuple) {
        if (t1.items().size() != t2.items().size()) {
          if (hard) st.fail("tuple arity mismatch");
          return;
        }
        for (std::size_t i = 0; i < t1.items().size(); ++i) {
          af_rec(t1.items()[i], t2.items()[i], st, hard);
          if (st.vec.collapsed()) return;
        }
        return;
      }
      break;
    default:
      break;
  }

  if (t2.kind() == TermKind::Record && t1.is_down_coerced()) {
    record_case(t1, t2, st, hard);
    return;
  }
  if (t1.kind() == TermKind::Choice && t2.kind() == TermKind::Choice) {
    choice_case(t1, t2, st, hard);
    return;
  }
  if (hard) st.fail("term categories are unrelated");
}

// Every record-tail occurrence requires its variable to hold a record; a
// slot forced elsewhere to a symbol or tuple admits no instantiation.
bool tails_instantiable(const Term& t, AfState& st) {
  switch (t.kind()) {
    case TermKind::Tuple:
      for (const Term& i : t.items()) {
        if (!tails_instantiable(i, st)) return false;
      }
      return true;
    case TermKind::Record:
    case TermKind::Choice: {
      if (t.kind() == TermKind::Record && t.tail()) {
        const LatticePoint& slot = st.vec.down[down_slot(st, *t.tail())];
        if (!slot.is_value() || slot.term().kind() != TermKind::Record) return false;
      }
      for (const Element& e : t.elements()) {
        if (st.presence_of(e.guard) != Presence::Absent && !tails_instantiable(e.term(), st)) return false;
      }
      return true;
    }
    case TermKind::Switch:
      for (const SwitchAlt& a : t.alternatives()) {
        if (st.presence_of(a.guard) != Presence::Absent && !tails_instantiable(a.term(), st)) return false;
      }
      return true;
    default:
      return true;
  }
}

ApproximationVector af_c_impl(const ConstraintSet& constraints, ApproximationVector vec, const PresenceFn& presence,
                              std::vector<std::string>* notes, int depth_bound) {
  AfState st{std::move(vec), &presence, "", notes, depth_bound};
  for (const SeniorityConstraint& c : constraints.items()) {
    st.origin = c.origin;
    af_rec(c.lhs, c.rhs, st, true);
    if (!st.vec.collapsed() && (!tails_instantiable(c.lhs, st) || !tails_instantiable(c.rhs, st))) {
      st.fail("a tail variable admits no collection value");
    }
    if (st.vec.collapsed()) break;
  }
  return std::move(st.vec);
}

void check_monotone(const ApproximationVector& prev, const ApproximationVector& cur) {
  for (std::size_t i = 0; i < cur.down.size(); ++i) {
    if (cur.down[i] == prev.down[i] || point_leq(cur.down[i], prev.down[i])) continue;
    if (cur.down[i].is_value() && prev.down[i].is_value() &&
        (contains_switch(cur.down[i].term()) || contains_switch(prev.down[i].term()))) {
      continue;  // switch-bearing slots may be incomparable
    }
    throw Error("internal: approximation stopped descending");
  }
  for (std::size_t i = 0; i < cur.up.size(); ++i) {
    if (cur.up[i] == prev.up[i] || point_leq(prev.up[i], cur.up[i])) continue;
    if (cur.up[i].is_value() && prev.up[i].is_value() &&
        (contains_switch(cur.up[i].term()) || contains_switch(prev.up[i].term()))) {
      continue;
    }
    throw Error("internal: approximation stopped ascending");
  }
}

}  // namespace

void ConstraintSet::add(SeniorityConstraint constraint) {
  const Term& l = constraint.lhs;
  const Term& r = constraint.rhs;
  const bool l_var = l.kind() == TermKind::DownVar || l.kind() == TermKind::UpVar;
  const bool r_var = r.kind() == TermKind::DownVar || r.kind() == TermKind::UpVar;
  const bool l_down = l.is_down_coerced();
  const bool l_up = l.is_up_coerced();
  const bool r_down = r.is_down_coerced();
  const bool r_up = r.is_up_coerced();
  if ((l_var || r_var) && ((l_down && r_up) || (l_up && r_down))) {
    throw SortError("constraint relates variables of different coercion sorts" +
                        (constraint.origin.empty() ? std::string() : " (" + constraint.origin + ")"),
                    l.span().known() ? l.span() : r.span());
  }
  items_.push_back(std::move(constraint));
}

VariableInventory ConstraintSet::inventory() const {
  VariableInventory inv;
  for (const SeniorityConstraint& c : items_) {
    inv.merge_from(c.lhs);
    inv.merge_from(c.rhs);
  }
  return inv;
}

ApproximationVector af(const SeniorityConstraint& constraint, const ApproximationVector& approx) {
  PresenceFn presence = constant_presence;
  AfState st{approx, &presence, constraint.origin, nullptr};
  af_rec(constraint.lhs, constraint.rhs, st, true);
  return std::move(st.vec);
}

ApproximationVector af_c(const ConstraintSet& constraints, const ApproximationVector& approx) {
  PresenceFn presence = constant_presence;
  return af_c_impl(constraints, approx, presence, nullptr, depth_bound_for(constraints));
}

bool verify_solution(const ConstraintSet& constraints, const Solution& solution) {
  TermSubstitution subst{solution.bvars, solution.down_vars, solution.up_vars};
  try {
    for (const SeniorityConstraint& c : constraints.items()) {
      Term lhs = substitute(c.lhs, subst);
      Term rhs = substitute(c.rhs, subst);
      if (!is_ground(lhs) || !is_ground(rhs)) return false;
      if (!is_well_formed(lhs) || !is_well_formed(rhs)) return false;
      if (!is_senior(canonicalize(lhs), canonicalize(rhs))) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

SolveResult solve_ground(const ConstraintSet& constraints, const SolveOptions& options) {
  VariableInventory inv = constraints.inventory();
  if (!inv.bvars.empty()) {
    throw NotGroundError("solve_ground requires a constraint set without b-variables");
  }
  ConstraintSet canon;
  for (const SeniorityConstraint& c : constraints.items()) {
    canon.add({canonicalize(c.lhs), canonicalize(c.rhs), c.origin});
  }

  SolveResult result;
  std::vector<std::string> notes;
  PresenceFn presence = constant_presence;
  const int bound = depth_bound_for(canon);
  ApproximationVector vec = ApproximationVector::initial(inv);
  for (;;) {
    if (result.stats.iterations >= options.max_iterations) {
      throw IterationLimitError("fixed-point iteration cap exceeded (" + std::to_string(options.max_iterations) +
                                ")");
    }
    ApproximationVector prev = vec;
    vec = af_c_impl(canon, std::move(vec), presence, &notes, bound);
    ++result.stats.iterations;
    if (options.on_iteration) options.on_iteration(result.stats.iterations, vec);
    check_monotone(prev, vec);
    if (vec == prev) break;
  }

  if (vec.collapsed()) {
    std::sort(notes.begin(), notes.end());
    notes.erase(std::unique(notes.begin(), notes.end()), notes.end());
    result.implicated = std::move(notes);
    return result;
  }

  Solution solution;
  for (std::size_t i = 0; i < inv.downvars.size(); ++i) {
    solution.down_vars.emplace(inv.downvars[i], canonicalize(vec.down[i].term()));
  }
  for (std::size_t i = 0; i < inv.upvars.size(); ++i) {
    solution.up_vars.emplace(inv.upvars[i], canonicalize(vec.up[i].term()));
  }
  TermSubstitution subst{{}, solution.down_vars, solution.up_vars};
  for (const SeniorityConstraint& c : canon.items()) {
    Term lhs = substitute(c.lhs, subst);
    Term rhs = substitute(c.rhs, subst);
    // A tail variable that is forced to contain a label already present in
    // its host collection makes every candidate instantiation ill-formed
    // (the fixed point is extremal, so larger/smaller solutions keep the
    // collision). That is unsatisfiability, not a solver defect.
    if (!is_well_formed(lhs) || !is_well_formed(rhs)) {
      result.implicated.push_back(c.origin);
      return result;
    }
    if (options.audit && !is_senior(canonicalize(lhs), canonicalize(rhs))) {
      throw VerificationError("solve_ground produced an assignment violating " +
                              (c.origin.empty() ? std::string("a constraint") : c.origin));
    }
  }
  result.solution = std::move(solution);
  return result;
}

namespace {

std::optional<Solution> extract_from_vector(const ApproximationVector& vec, const VariableInventory& inv,
                                            const BoolAssignment& assignment) {
  if (vec.collapsed()) return std::nullopt;
  Solution s;
  s.bvars = assignment;
  try {
    TermSubstitution bools{assignment, {}, {}};
    for (std::size_t i = 0; i < inv.downvars.size(); ++i) {
      if (!vec.down[i].is_value()) return std::nullopt;
      s.down_vars.emplace(inv.downvars[i], canonicalize(substitute(vec.down[i].term(), bools)));
    }
    for (std::size_t i = 0; i < inv.upvars.size(); ++i) {
      if (!vec.up[i].is_value()) return std::nullopt;
      s.up_vars.emplace(inv.upvars[i], canonicalize(substitute(vec.up[i].term(), bools)));
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return s;
}

std::optional<Solution> solve_under_assignment(const ConstraintSet& constraints, const BoolAssignment& assignment,
                                               int max_iterations) {
  try {
    ConstraintSet ground;
    TermSubstitution bools{assignment, {}, {}};
    for (const SeniorityConstraint& c : constraints.items()) {
      ground.add({substitute(c.lhs, bools), substitute(c.rhs, bools), c.origin});
    }
    SolveOptions inner;
    inner.max_iterations = max_iterations;
    SolveResult r = solve_ground(ground, inner);
    if (!r.satisfiable()) return std::nullopt;
    Solution s = std::move(*r.solution);
    s.bvars = assignment;
    return s;
  } catch (const Error&) {
    return std::nullopt;  // the assignment itself is inadmissible
  }
}

bool sets_equivalent(const BoolConstraintSet& before, const BoolConstraintSet& after, int* sat_queries) {
  const bool subset = std::all_of(before.formulas().begin(), before.formulas().end(),
                                  [&](const Guard& g) { return after.contains(g); });
  if (subset) {
    // Models of `after` are contained in models of `before`; equality holds
    // iff `before` entails everything new.
    *sat_queries += 1;
    return entails(before, Guard::conjunction_of(after.formulas()));
  }
  *sat_queries += 2;
  return models_equivalent(before, after);
}

std::vector<std::string> unsat_provenance(const BoolConstraintSet& set, int* sat_queries) {
  BoolConstraintSet acc;
  acc.note_variables(set.variables());
  for (std::size_t i = 0; i < set.formulas().size(); ++i) {
    acc.add(set.formulas()[i], set.provenance()[i]);
    *sat_queries += 1;
    if (!solve(acc).has_value()) {
      return {set.provenance()[i]};
    }
  }
  return {};
}

}  // namespace

SolveResult solve(const ConstraintSet& constraints, const SolveOptions& options) {
  VariableInventory inv = constraints.inventory();
  if (inv.bvars.empty()) {
    return solve_ground(constraints, options);
  }

  SolveResult result;
  std::vector<std::string> collapse_notes;
  const int bound = depth_bound_for(constraints);
  ApproximationVector vec = ApproximationVector::initial(inv);
  BoolConstraintSet current;
  current.note_variables(inv.bvars);

  for (;;) {
    if (result.stats.iterations >= options.max_iterations) {
      throw IterationLimitError("solver iteration cap exceeded (" + std::to_string(options.max_iterations) + ")");
    }
    // Element presence consults the Boolean set of the previous iteration.
    auto cache = std::make_shared<std::map<std::string, Presence>>();
    auto base = std::make_shared<BoolConstraintSet>(current);
    int* queries = &result.stats.sat_queries;
    PresenceFn presence = [cache, base, queries](const Guard& g) -> Presence {
      if (g.is_false()) return Presence::Absent;
      if (g.is_true()) return Presence::Hard;
      Guard normal = g.normalized();
      if (normal.is_false()) return Presence::Absent;
      if (normal.is_true()) return Presence::Hard;
      const std::string key = normal.to_string();
      auto it = cache->find(key);
      if (it != cache->end()) return it->second;
      BoolConstraintSet probe = *base;
      probe.add(normal);
      ++*queries;
      const Presence p = solve(probe).has_value() ? Presence::Soft : Presence::Absent;
      cache->emplace(key, p);
      return p;
    };

    ApproximationVector prev = vec;
    vec = af_c_impl(constraints, std::move(vec), presence, &collapse_notes, bound);
    ++result.stats.iterations;
    if (options.on_iteration) options.on_iteration(result.stats.iterations, vec);
    check_monotone(prev, vec);

    BoolConstraintSet next;
    next.note_variables(inv.bvars);
    if (!vec.collapsed()) {
      for (const SeniorityConstraint& c : constraints.items()) {
        auto lhs = substitute_full(c.lhs, vec);
        auto rhs = substitute_full(c.rhs, vec);
        if (!lhs || !rhs) continue;
        for (GeneratedFormula& f : wfc_provenanced(*lhs, c.origin)) next.add(f.formula, f.provenance);
        for (GeneratedFormula& f : wfc_provenanced(*rhs, c.origin)) next.add(f.formula, f.provenance);
        for (GeneratedFormula& f : sc_provenanced(*lhs, *rhs, c.origin)) next.add(f.formula, f.provenance);
      }
    }
    const bool vec_stable = vec == prev;
    const bool models_stable = sets_equivalent(current, next, &result.stats.sat_queries);
    current = std::move(next);
    if (vec_stable && models_stable) break;
  }

  // Candidate phase: take the deterministic first model, verify it against
  // the ground semantics, block and retry on failure.
  for (;;) {
    ++result.stats.sat_queries;
    auto model = solve(current);
    if (!model) break;
    ++result.stats.models_tried;
    BoolAssignment assignment;
    for (const std::string& name : inv.bvars) assignment[name] = model->values.at(name);

    if (auto s = extract_from_vector(vec, inv, assignment)) {
      if (verify_solution(constraints, *s)) {
        result.solution = std::move(*s);
        result.adjunct = std::move(current);
        return result;
      }
    }
    if (auto s = solve_under_assignment(constraints, assignment, options.max_iterations)) {
      if (verify_solution(constraints, *s)) {
        result.solution = std::move(*s);
        result.adjunct = std::move(current);
        return result;
      }
    }
    std::vector<Guard> negated;
    negated.reserve(inv.bvars.size());
    for (const std::string& name : inv.bvars) {
      negated.push_back(assignment[name] ? Guard::negation(Guard::var(name)) : Guard::var(name));
    }
    current.add(Guard::disjunction_of(negated), "blocked model");
  }

  // The Boolean abstraction is unsatisfiable. The generated formulas are only
  // as strong as the fixed-point approximation, so confirm against the ground
  // semantics while the assignment space is small.
  if (inv.bvars.size() <= 16) {
    result.stats.exhaustive_confirmation = true;
    const std::size_t count = std::size_t{1} << inv.bvars.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      BoolAssignment assignment;
      for (std::size_t i = 0; i < inv.bvars.size(); ++i) {
        assignment[inv.bvars[i]] = ((mask >> (inv.bvars.size() - 1 - i)) & 1U) != 0;
      }
      if (auto s = solve_under_assignment(constraints, assignment, options.max_iterations)) {
        if (verify_solution(constraints, *s)) {
          ++result.stats.models_tried;
          result.solution = std::move(*s);
          result.adjunct = std::move(current);
          return result;
        }
      }
    }
  }

  result.implicated = collapse_notes;
  for (std::string& p : unsat_provenance(current, &result.stats.sat_queries)) {
    result.implicated.push_back(std::move(p));
  }
  std::sort(result.implicated.begin(), result.implicated.end());
  result.implicated.erase(std::unique(result.implicated.begin(), result.implicated.end()),
                          result.implicated.end());
  result.adjunct = std::move(current);
  return result;
}

}  // namespace mdl
