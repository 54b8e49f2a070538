#include "mdl/term.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "mdl/errors.hpp"

namespace mdl {

struct Term::Node {
  TermKind kind = TermKind::Record;
  std::string name;
  std::vector<Term> items;
  std::vector<Element> elements;
  std::optional<std::string> tail;
  std::vector<SwitchAlt> alternatives;
  SourceSpan span;
};

Element::Element(std::string label_, Guard guard_, Term term_)
    : label(std::move(label_)), guard(std::move(guard_)), term_ptr(std::make_shared<Term>(std::move(term_))) {}

Element::Element(std::string label_, Term term_)
    : Element(std::move(label_), Guard::constant(true), std::move(term_)) {}

SwitchAlt::SwitchAlt(Guard guard_, Term term_)
    : guard(std::move(guard_)), term_ptr(std::make_shared<Term>(std::move(term_))) {}

namespace {

const std::shared_ptr<const Term::Node>& nil_node() {
  static const std::shared_ptr<const Term::Node> node = std::make_shared<Term::Node>();
  return node;
}

}  // namespace

Term::Term() : node_(nil_node()) {}

Term Term::symbol(std::string name) {
  assert(!name.empty());
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Symbol;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::tuple(std::vector<Term> items) {
  assert(!items.empty());
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Tuple;
  node->items = std::move(items);
  return Term(std::move(node));
}

Term Term::record(std::vector<Element> elements, std::optional<std::string> tail) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Record;
  node->elements = std::move(elements);
  node->tail = std::move(tail);
  return Term(std::move(node));
}

Term Term::choice(std::vector<Element> elements, std::optional<std::string> tail) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Choice;
  node->elements = std::move(elements);
  node->tail = std::move(tail);
  return Term(std::move(node));
}

Term Term::switch_of(std::vector<SwitchAlt> alternatives) {
  assert(!alternatives.empty());
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Switch;
  node->alternatives = std::move(alternatives);
  return Term(std::move(node));
}

Term Term::down_var(std::string name) {
  assert(!name.empty());
  auto node = std::make_shared<Node>();
  node->kind = TermKind::DownVar;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::up_var(std::string name) {
  assert(!name.empty());
  auto node = std::make_shared<Node>();
  node->kind = TermKind::UpVar;
  node->name = std::move(name);
  return Term(std::move(node));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::items() const { return node_->items; }
const std::vector<Element>& Term::elements() const { return node_->elements; }
const std::optional<std::string>& Term::tail() const { return node_->tail; }
const std::vector<SwitchAlt>& Term::alternatives() const { return node_->alternatives; }

bool Term::is_nil() const { return kind() == TermKind::Record && elements().empty() && !tail(); }
bool Term::is_none() const { return kind() == TermKind::Choice && elements().empty() && !tail(); }

bool Term::is_down_coerced() const {
  switch (kind()) {
    case TermKind::Symbol:
    case TermKind::Tuple:
    case TermKind::Record:
    case TermKind::DownVar:
      return true;
    default:
      return false;
  }
}

bool Term::is_up_coerced() const { return kind() == TermKind::Choice || kind() == TermKind::UpVar; }

const SourceSpan& Term::span() const { return node_->span; }

Term Term::with_span(SourceSpan span) const {
  auto node = std::make_shared<Node>(*node_);
  node->span = std::move(span);
  return Term(std::move(node));
}

int Term::compare(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Symbol:
    case TermKind::DownVar:
    case TermKind::UpVar:
      return a.name().compare(b.name());
    case TermKind::Tuple: {
      if (a.items().size() != b.items().size()) return a.items().size() < b.items().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.items().size(); ++i) {
        int c = compare(a.items()[i], b.items()[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case TermKind::Record:
    case TermKind::Choice: {
      // Collections are unordered: compare element multisets, not sequences.
      if (a.elements().size() != b.elements().size()) return a.elements().size() < b.elements().size() ? -1 : 1;
      auto element_cmp = [](const Element& x, const Element& y) {
        int c = x.label.compare(y.label);
        if (c != 0) return c;
        c = Guard::compare(x.guard, y.guard);
        if (c != 0) return c;
        return compare(x.term(), y.term());
      };
      std::vector<const Element*> ea, eb;
      for (const Element& e : a.elements()) ea.push_back(&e);
      for (const Element& e : b.elements()) eb.push_back(&e);
      auto by_cmp = [&](const Element* x, const Element* y) { return element_cmp(*x, *y) < 0; };
      std::sort(ea.begin(), ea.end(), by_cmp);
      std::sort(eb.begin(), eb.end(), by_cmp);
      for (std::size_t i = 0; i < ea.size(); ++i) {
        int c = element_cmp(*ea[i], *eb[i]);
        if (c != 0) return c;
      }
      if (a.tail().has_value() != b.tail().has_value()) return a.tail().has_value() ? 1 : -1;
      if (a.tail() && *a.tail() != *b.tail()) return *a.tail() < *b.tail() ? -1 : 1;
      return 0;
    }
    case TermKind::Switch: {
      if (a.alternatives().size() != b.alternatives().size())
        return a.alternatives().size() < b.alternatives().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.alternatives().size(); ++i) {
        int c = Guard::compare(a.alternatives()[i].guard, b.alternatives()[i].guard);
        if (c != 0) return c;
        c = compare(a.alternatives()[i].term(), b.alternatives()[i].term());
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

void VariableInventory::merge_from(const Term& term) {
  switch (term.kind()) {
    case TermKind::Symbol:
      return;
    case TermKind::DownVar:
      if (seen_down_.emplace(term.name(), downvars.size()).second) downvars.push_back(term.name());
      return;
    case TermKind::UpVar:
      if (seen_up_.emplace(term.name(), upvars.size()).second) upvars.push_back(term.name());
      return;
    case TermKind::Tuple:
      for (const Term& item : term.items()) merge_from(item);
      return;
    case TermKind::Record:
    case TermKind::Choice: {
      for (const Element& e : term.elements()) {
        for (const std::string& v : e.guard.variables()) {
          if (seen_b_.emplace(v, bvars.size()).second) bvars.push_back(v);
        }
        merge_from(e.term());
      }
      if (term.tail()) {
        if (term.kind() == TermKind::Record) {
          if (seen_down_.emplace(*term.tail(), downvars.size()).second) downvars.push_back(*term.tail());
        } else {
          if (seen_up_.emplace(*term.tail(), upvars.size()).second) upvars.push_back(*term.tail());
        }
      }
      return;
    }
    case TermKind::Switch:
      for (const SwitchAlt& alt : term.alternatives()) {
        for (const std::string& v : alt.guard.variables()) {
          if (seen_b_.emplace(v, bvars.size()).second) bvars.push_back(v);
        }
        merge_from(alt.term());
      }
      return;
  }
}

std::optional<std::size_t> VariableInventory::bvar_index(const std::string& name) const {
  auto it = seen_b_.find(name);
  if (it == seen_b_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> VariableInventory::downvar_index(const std::string& name) const {
  auto it = seen_down_.find(name);
  if (it == seen_down_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> VariableInventory::upvar_index(const std::string& name) const {
  auto it = seen_up_.find(name);
  if (it == seen_up_.end()) return std::nullopt;
  return it->second;
}

VariableInventory collect_variables(const Term& term) {
  VariableInventory inv;
  inv.merge_from(term);
  return inv;
}

bool is_semi_ground(const Term& term) {
  VariableInventory inv = collect_variables(term);
  return inv.downvars.empty() && inv.upvars.empty();
}

bool is_ground(const Term& term) {
  VariableInventory inv = collect_variables(term);
  return inv.empty();
}

namespace {

bool replacement_is_down(const Term& t) { return t.is_down_coerced(); }
bool replacement_is_up(const Term& t) { return t.is_up_coerced(); }

}  // namespace

Term substitute(const Term& term, const TermSubstitution& subst) {
  switch (term.kind()) {
    case TermKind::Symbol:
      return term;
    case TermKind::DownVar: {
      auto it = subst.down.find(term.name());
      if (it == subst.down.end()) return term;
      if (!replacement_is_down(it->second)) {
        throw SortError("down-coerced variable '" + term.name() + "' bound to a non-down-coerced term", term.span());
      }
      return it->second;
    }
    case TermKind::UpVar: {
      auto it = subst.up.find(term.name());
      if (it == subst.up.end()) return term;
      if (!replacement_is_up(it->second)) {
        throw SortError("up-coerced variable '" + term.name() + "' bound to a non-up-coerced term", term.span());
      }
      return it->second;
    }
    case TermKind::Tuple: {
      std::vector<Term> items;
      items.reserve(term.items().size());
      for (const Term& item : term.items()) items.push_back(substitute(item, subst));
      return Term::tuple(std::move(items)).with_span(term.span());
    }
    case TermKind::Record:
    case TermKind::Choice: {
      const bool is_record = term.kind() == TermKind::Record;
      std::vector<Element> elements;
      elements.reserve(term.elements().size());
      for (const Element& e : term.elements()) {
        elements.emplace_back(e.label, e.guard.substitute(subst.bools), substitute(e.term(), subst));
      }
      std::optional<std::string> tail = term.tail();
      if (tail) {
        const auto& map = is_record ? subst.down : subst.up;
        auto it = map.find(*tail);
        if (it != map.end()) {
          const Term& repl = it->second;
          if (repl.kind() == (is_record ? TermKind::DownVar : TermKind::UpVar)) {
            tail = repl.name();
          } else if (repl.kind() == term.kind()) {
            // Splice the replacement's elements and adopt its tail. The
            // spliced elements keep their own guards; duplicate labels are a
            // well-formedness matter, not a substitution error.
            for (const Element& e : repl.elements()) elements.push_back(e);
            tail = repl.tail();
          } else {
            throw SortError("tail variable '" + *tail + "' bound to a term of a different collection kind",
                            term.span());
          }
        }
      }
      Term out = is_record ? Term::record(std::move(elements), std::move(tail))
                           : Term::choice(std::move(elements), std::move(tail));
      return out.with_span(term.span());
    }
    case TermKind::Switch: {
      std::vector<SwitchAlt> alts;
      alts.reserve(term.alternatives().size());
      for (const SwitchAlt& alt : term.alternatives()) {
        alts.emplace_back(alt.guard.substitute(subst.bools), substitute(alt.term(), subst));
      }
      return Term::switch_of(std::move(alts)).with_span(term.span());
    }
  }
  return term;
}

namespace {

bool constant_guard(const Guard& g, const BoolAssignment& assignment) {
  if (g.is_constant()) return g.constant_value();
  return g.evaluate(assignment);  // throws MissingVariableError when partial
}

Term canonicalize_with(const Term& term, const BoolAssignment& assignment) {
  switch (term.kind()) {
    case TermKind::Symbol:
    case TermKind::DownVar:
    case TermKind::UpVar:
      return term;
    case TermKind::Tuple: {
      std::vector<Term> items;
      items.reserve(term.items().size());
      for (const Term& item : term.items()) items.push_back(canonicalize_with(item, assignment));
      return Term::tuple(std::move(items)).with_span(term.span());
    }
    case TermKind::Record:
    case TermKind::Choice: {
      std::vector<Element> elements;
      for (const Element& e : term.elements()) {
        if (!constant_guard(e.guard, assignment)) continue;
        elements.emplace_back(e.label, canonicalize_with(e.term(), assignment));
      }
      Term out = term.kind() == TermKind::Record ? Term::record(std::move(elements), term.tail())
                                                 : Term::choice(std::move(elements), term.tail());
      return out.with_span(term.span());
    }
    case TermKind::Switch: {
      const Term* taken = nullptr;
      for (const SwitchAlt& alt : term.alternatives()) {
        if (constant_guard(alt.guard, assignment)) {
          if (taken != nullptr) {
            throw IllFormedSwitchError("switch has more than one true alternative");
          }
          taken = &alt.term();
        }
      }
      if (taken == nullptr) throw IllFormedSwitchError("switch has no true alternative");
      return canonicalize_with(*taken, assignment);
    }
  }
  return term;
}

}  // namespace

Term canonicalize(const Term& term) { return canonicalize_with(term, {}); }

Term canonicalize(const Term& term, const BoolAssignment& assignment) {
  return canonicalize_with(term, assignment);
}

namespace {

bool well_formed_rec(const Term& term) {
  switch (term.kind()) {
    case TermKind::Symbol:
      return true;
    case TermKind::DownVar:
    case TermKind::UpVar:
      return false;  // unreachable: entry point checks groundness
    case TermKind::Tuple: {
      for (const Term& item : term.items()) {
        if (!well_formed_rec(item)) return false;
      }
      return true;
    }
    case TermKind::Record:
    case TermKind::Choice: {
      const auto& elems = term.elements();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (!elems[i].guard.constant_value()) continue;
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
          if (elems[j].guard.constant_value() && elems[i].label == elems[j].label) return false;
        }
        if (!well_formed_rec(elems[i].term())) return false;
      }
      return true;
    }
    case TermKind::Switch: {
      const Term* taken = nullptr;
      for (const SwitchAlt& alt : term.alternatives()) {
        if (alt.guard.constant_value()) {
          if (taken != nullptr) return false;
          taken = &alt.term();
        }
      }
      return taken != nullptr && well_formed_rec(*taken);
    }
  }
  return false;
}

}  // namespace

bool is_well_formed(const Term& term) {
  if (!is_ground(term)) throw NotGroundError("well-formedness is defined on ground terms only");
  return well_formed_rec(term);
}

}  // namespace mdl
