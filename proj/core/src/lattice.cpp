#include "mdl/lattice.hpp"

#include <algorithm>
#include <optional>

#include "mdl/errors.hpp"

namespace mdl {

namespace {

const Element* find_element(const Term& collection, const std::string& label) {
  for (const Element& e : collection.elements()) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

}  // namespace

bool is_senior(const Term& t1, const Term& t2) {
  if (t1.is_none() && t2.kind() == TermKind::Choice) return true;
  if (t2.is_nil() &&
      (t1.kind() == TermKind::Symbol || t1.kind() == TermKind::Tuple || t1.kind() == TermKind::Record)) {
    return true;
  }
  if (t1 == t2) return true;
  if (t1.kind() != t2.kind()) return false;
  switch (t1.kind()) {
    case TermKind::Tuple: {
      if (t1.items().size() != t2.items().size()) return false;
      for (std::size_t i = 0; i < t1.items().size(); ++i) {
        if (!is_senior(t1.items()[i], t2.items()[i])) return false;
      }
      return true;
    }
    case TermKind::Record: {
      // Width-covariant: the junior record carries at least the senior's
      // labels, with junior payloads.
      for (const Element& e2 : t2.elements()) {
        const Element* e1 = find_element(t1, e2.label);
        if (e1 == nullptr || !is_senior(e1->term(), e2.term())) return false;
      }
      return true;
    }
    case TermKind::Choice: {
      // Width-contravariant: every junior variant must be accepted.
      for (const Element& e1 : t1.elements()) {
        const Element* e2 = find_element(t2, e1.label);
        if (e2 == nullptr || !is_senior(e1.term(), e2->term())) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

namespace {

std::optional<Term> glb_terms(const Term& t1, const Term& t2);
std::optional<Term> lub_terms(const Term& t1, const Term& t2);

// Greatest lower bound across both categories; nullopt when none exists.
std::optional<Term> glb_terms(const Term& t1, const Term& t2) {
  if (t1 == t2) return t1;
  if (t1.is_nil()) return t2.is_down_coerced() && t2.kind() != TermKind::DownVar ? std::optional<Term>(t2) : std::nullopt;
  if (t2.is_nil()) return t1.is_down_coerced() && t1.kind() != TermKind::DownVar ? std::optional<Term>(t1) : std::nullopt;
  if (t1.kind() != t2.kind()) return std::nullopt;
  switch (t1.kind()) {
    case TermKind::Symbol:
      return std::nullopt;  // distinct symbols have no common junior
    case TermKind::Tuple: {
      if (t1.items().size() != t2.items().size()) return std::nullopt;
      std::vector<Term> items;
      items.reserve(t1.items().size());
      for (std::size_t i = 0; i < t1.items().size(); ++i) {
        auto m = glb_terms(t1.items()[i], t2.items()[i]);
        if (!m) return std::nullopt;
        items.push_back(std::move(*m));
      }
      return Term::tuple(std::move(items));
    }
    case TermKind::Record: {
      if (t1.tail() || t2.tail()) {
        throw SortError("meet is defined on closed collections; substitute tails first");
      }
      // Union of labels; shared labels meet their payloads and disjoin their
      // guards (the union of two requirement sets).
      std::vector<Element> out;
      for (const Element& e1 : t1.elements()) {
        const Element* e2 = find_element(t2, e1.label);
        if (e2 == nullptr) {
          out.push_back(e1);
          continue;
        }
        auto m = glb_terms(e1.term(), e2->term());
        if (!m) return std::nullopt;
        out.emplace_back(e1.label, Guard::disjunction(e1.guard, e2->guard).normalized(), std::move(*m));
      }
      for (const Element& e2 : t2.elements()) {
        if (find_element(t1, e2.label) == nullptr) out.push_back(e2);
      }
      return Term::record(std::move(out));
    }
    case TermKind::Choice: {
      if (t1.tail() || t2.tail()) {
        throw SortError("meet is defined on closed collections; substitute tails first");
      }
      // Junior choice: intersection of labels, conjoined guards.
      std::vector<Element> out;
      for (const Element& e1 : t1.elements()) {
        const Element* e2 = find_element(t2, e1.label);
        if (e2 == nullptr) continue;
        auto m = glb_terms(e1.term(), e2->term());
        if (!m) return std::nullopt;
        out.emplace_back(e1.label, Guard::conjunction(e1.guard, e2->guard).normalized(), std::move(*m));
      }
      return Term::choice(std::move(out));
    }
    default:
      return std::nullopt;
  }
}

// Least upper bound across both categories; nullopt when none exists.
std::optional<Term> lub_terms(const Term& t1, const Term& t2) {
  if (t1 == t2) return t1;
  if (t1.kind() == TermKind::Choice && t2.kind() == TermKind::Choice) {
    if (t1.is_none()) return t2;
    if (t2.is_none()) return t1;
    if (t1.tail() || t2.tail()) {
      throw SortError("join is defined on closed collections; substitute tails first");
    }
    std::vector<Element> out;
    for (const Element& e1 : t1.elements()) {
      const Element* e2 = find_element(t2, e1.label);
      if (e2 == nullptr) {
        out.push_back(e1);
        continue;
      }
      auto l = lub_terms(e1.term(), e2->term());
      if (!l) return std::nullopt;
      out.emplace_back(e1.label, Guard::disjunction(e1.guard, e2->guard).normalized(), std::move(*l));
    }
    for (const Element& e2 : t2.elements()) {
      if (find_element(t1, e2.label) == nullptr) out.push_back(e2);
    }
    return Term::choice(std::move(out));
  }
  if (t1.is_up_coerced() || t2.is_up_coerced()) return std::nullopt;
  // Down-coerced least upper bounds: nil always bounds from above, records
  // refine to the intersection of labels, anything else unequal gives nil.
  if (t1.kind() == TermKind::Record && t2.kind() == TermKind::Record && !t1.tail() && !t2.tail()) {
    std::vector<Element> out;
    for (const Element& e1 : t1.elements()) {
      const Element* e2 = find_element(t2, e1.label);
      if (e2 == nullptr) continue;
      auto l = lub_terms(e1.term(), e2->term());
      if (!l) return std::nullopt;
      out.emplace_back(e1.label, Guard::conjunction(e1.guard, e2->guard).normalized(), std::move(*l));
    }
    return Term::record(std::move(out));
  }
  return Term::nil();
}

void require_down(const LatticePoint& p) {
  if (p.is_top()) throw SortError("meet applies to down-coerced points; got top");
  if (p.is_value() && !(p.term().kind() == TermKind::Symbol || p.term().kind() == TermKind::Tuple ||
                        p.term().kind() == TermKind::Record)) {
    throw SortError("meet applies to symbols, tuples and records");
  }
}

void require_up(const LatticePoint& p) {
  if (p.is_bottom()) throw SortError("join applies to up-coerced points; got bottom");
  if (p.is_value() && p.term().kind() != TermKind::Choice) {
    throw SortError("join applies to choices");
  }
}

}  // namespace

LatticePoint meet(const LatticePoint& a, const LatticePoint& b) {
  require_down(a);
  require_down(b);
  if (a.is_bottom() || b.is_bottom()) return LatticePoint::bottom();
  auto m = glb_terms(a.term(), b.term());
  if (!m) return LatticePoint::bottom();
  return LatticePoint::value(std::move(*m));
}

LatticePoint join(const LatticePoint& a, const LatticePoint& b) {
  require_up(a);
  require_up(b);
  if (a.is_top() || b.is_top()) return LatticePoint::top();
  auto l = lub_terms(a.term(), b.term());
  if (!l) return LatticePoint::top();
  return LatticePoint::value(std::move(*l));
}

bool point_leq(const LatticePoint& a, const LatticePoint& b) {
  if (a.is_bottom() || b.is_top()) return true;
  if (b.is_bottom() || a.is_top()) return false;
  return is_senior(a.term(), b.term());
}

ApproximationVector ApproximationVector::initial(VariableInventory inventory) {
  ApproximationVector v;
  v.down.assign(inventory.downvars.size(), LatticePoint::value(Term::nil()));
  v.up.assign(inventory.upvars.size(), LatticePoint::value(Term::none()));
  v.vars = std::move(inventory);
  return v;
}

void ApproximationVector::collapse() {
  failed = true;
  std::fill(down.begin(), down.end(), LatticePoint::bottom());
  std::fill(up.begin(), up.end(), LatticePoint::top());
}

std::vector<LatticePoint> vector_meet(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b) {
  if (a.size() != b.size()) throw LengthMismatchError("vector_meet length mismatch");
  std::vector<LatticePoint> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(meet(a[i], b[i]));
  return out;
}

std::vector<LatticePoint> vector_join(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b) {
  if (a.size() != b.size()) throw LengthMismatchError("vector_join length mismatch");
  std::vector<LatticePoint> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(join(a[i], b[i]));
  return out;
}

ApproximationVector vector_combine(const ApproximationVector& a, const ApproximationVector& b) {
  ApproximationVector out;
  out.vars = a.vars;
  out.down = vector_meet(a.down, b.down);
  out.up = vector_join(a.up, b.up);
  out.failed = a.failed || b.failed;
  // A failed slot means no approximation exists at all; keep the whole-vector
  // sentinel representation.
  for (const LatticePoint& p : out.down) out.failed = out.failed || p.is_bottom();
  for (const LatticePoint& p : out.up) out.failed = out.failed || p.is_top();
  if (out.failed) out.collapse();
  return out;
}

bool vector_leq(const ApproximationVector& a, const ApproximationVector& b) {
  if (a.down.size() != b.down.size() || a.up.size() != b.up.size()) {
    throw LengthMismatchError("vector_leq length mismatch");
  }
  for (std::size_t i = 0; i < a.down.size(); ++i) {
    if (!point_leq(a.down[i], b.down[i])) return false;
  }
  for (std::size_t i = 0; i < a.up.size(); ++i) {
    if (!point_leq(a.up[i], b.up[i])) return false;
  }
  return true;
}

}  // namespace mdl
