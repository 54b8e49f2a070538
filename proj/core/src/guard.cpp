#include "mdl/guard.hpp"

#include <algorithm>
#include <cassert>

#include "mdl/errors.hpp"

namespace mdl {

struct Guard::Node {
  Kind kind = Kind::Const;
  bool value = true;
  std::string name;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

namespace {

const std::shared_ptr<const Guard::Node>& true_node() {
  static const std::shared_ptr<const Guard::Node> node = std::make_shared<Guard::Node>();
  return node;
}

const std::shared_ptr<const Guard::Node>& false_node() {
  static const std::shared_ptr<const Guard::Node> node = [] {
    auto n = std::make_shared<Guard::Node>();
    n->value = false;
    return n;
  }();
  return node;
}

}  // namespace

Guard::Guard() : node_(true_node()) {}

Guard Guard::constant(bool value) { return Guard(value ? true_node() : false_node()); }

Guard Guard::var(std::string name) {
  assert(!name.empty());
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->name = std::move(name);
  return Guard(std::move(node));
}

Guard Guard::negation(Guard operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->left = std::move(operand.node_);
  return Guard(std::move(node));
}

namespace {

std::shared_ptr<const Guard::Node> binary_node(Guard::Kind kind, std::shared_ptr<const Guard::Node> l,
                                               std::shared_ptr<const Guard::Node> r) {
  auto node = std::make_shared<Guard::Node>();
  node->kind = kind;
  node->left = std::move(l);
  node->right = std::move(r);
  return node;
}

}  // namespace

Guard Guard::conjunction(Guard lhs, Guard rhs) {
  return Guard(binary_node(Kind::And, std::move(lhs.node_), std::move(rhs.node_)));
}

Guard Guard::disjunction(Guard lhs, Guard rhs) {
  return Guard(binary_node(Kind::Or, std::move(lhs.node_), std::move(rhs.node_)));
}

Guard Guard::implication(Guard lhs, Guard rhs) {
  return Guard(binary_node(Kind::Implies, std::move(lhs.node_), std::move(rhs.node_)));
}

Guard Guard::conjunction_of(const std::vector<Guard>& operands) {
  if (operands.empty()) return constant(true);
  Guard out = operands.front();
  for (std::size_t i = 1; i < operands.size(); ++i) out = conjunction(out, operands[i]);
  return out;
}

Guard Guard::disjunction_of(const std::vector<Guard>& operands) {
  if (operands.empty()) return constant(false);
  Guard out = operands.front();
  for (std::size_t i = 1; i < operands.size(); ++i) out = disjunction(out, operands[i]);
  return out;
}

Guard::Kind Guard::kind() const { return node_->kind; }

bool Guard::constant_value() const {
  assert(kind() == Kind::Const);
  return node_->value;
}

const std::string& Guard::variable() const {
  assert(kind() == Kind::Var);
  return node_->name;
}

Guard Guard::operand() const {
  assert(kind() == Kind::Not);
  return Guard(node_->left);
}

Guard Guard::left() const {
  assert(node_->left);
  return Guard(node_->left);
}

Guard Guard::right() const {
  assert(node_->right);
  return Guard(node_->right);
}

bool Guard::evaluate(const BoolAssignment& assignment) const {
  switch (kind()) {
    case Kind::Const:
      return constant_value();
    case Kind::Var: {
      auto it = assignment.find(variable());
      if (it == assignment.end()) throw MissingVariableError(variable());
      return it->second;
    }
    case Kind::Not:
      return !operand().evaluate(assignment);
    case Kind::And:
      return left().evaluate(assignment) && right().evaluate(assignment);
    case Kind::Or:
      return left().evaluate(assignment) || right().evaluate(assignment);
    case Kind::Implies:
      return !left().evaluate(assignment) || right().evaluate(assignment);
  }
  return false;
}

Guard Guard::substitute(const BoolAssignment& assignment) const {
  switch (kind()) {
    case Kind::Const:
      return *this;
    case Kind::Var: {
      auto it = assignment.find(variable());
      return it == assignment.end() ? *this : constant(it->second);
    }
    case Kind::Not: {
      Guard inner = operand().substitute(assignment);
      if (inner.is_constant()) return constant(!inner.constant_value());
      return negation(std::move(inner));
    }
    case Kind::And: {
      Guard l = left().substitute(assignment);
      Guard r = right().substitute(assignment);
      if (l.is_false() || r.is_false()) return constant(false);
      if (l.is_true()) return r;
      if (r.is_true()) return l;
      return conjunction(std::move(l), std::move(r));
    }
    case Kind::Or: {
      Guard l = left().substitute(assignment);
      Guard r = right().substitute(assignment);
      if (l.is_true() || r.is_true()) return constant(true);
      if (l.is_false()) return r;
      if (r.is_false()) return l;
      return disjunction(std::move(l), std::move(r));
    }
    case Kind::Implies: {
      Guard l = left().substitute(assignment);
      Guard r = right().substitute(assignment);
      if (l.is_false() || r.is_true()) return constant(true);
      if (l.is_true()) return r;
      if (r.is_false()) {
        if (l.is_constant()) return constant(!l.constant_value());
        return negation(std::move(l));
      }
      return implication(std::move(l), std::move(r));
    }
  }
  return *this;
}

void Guard::collect_variables(std::vector<std::string>& order, std::set<std::string>& seen) const {
  switch (kind()) {
    case Kind::Const:
      return;
    case Kind::Var:
      if (seen.insert(variable()).second) order.push_back(variable());
      return;
    case Kind::Not:
      operand().collect_variables(order, seen);
      return;
    default:
      left().collect_variables(order, seen);
      right().collect_variables(order, seen);
      return;
  }
}

std::vector<std::string> Guard::variables() const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_variables(order, seen);
  return order;
}

namespace {

void flatten(const Guard& g, Guard::Kind kind, std::vector<Guard>& out) {
  if (g.kind() == kind) {
    flatten(g.left(), kind, out);
    flatten(g.right(), kind, out);
  } else {
    out.push_back(g);
  }
}

Guard rebuild_chain(Guard::Kind kind, std::vector<Guard> operands, bool neutral) {
  // Deduplicate and sort for a canonical operand order.
  std::sort(operands.begin(), operands.end(), [](const Guard& a, const Guard& b) { return Guard::compare(a, b) < 0; });
  operands.erase(std::unique(operands.begin(), operands.end(), [](const Guard& a, const Guard& b) { return a == b; }),
                 operands.end());
  if (operands.empty()) return Guard::constant(neutral);
  Guard out = operands.front();
  for (std::size_t i = 1; i < operands.size(); ++i) {
    out = kind == Guard::Kind::And ? Guard::conjunction(out, operands[i]) : Guard::disjunction(out, operands[i]);
  }
  return out;
}

}  // namespace

Guard Guard::normalized() const {
  switch (kind()) {
    case Kind::Const:
    case Kind::Var:
      return *this;
    case Kind::Not: {
      Guard inner = operand().normalized();
      if (inner.is_constant()) return constant(!inner.constant_value());
      if (inner.kind() == Kind::Not) return inner.operand();
      return negation(std::move(inner));
    }
    case Kind::And:
    case Kind::Or: {
      const bool is_and = kind() == Kind::And;
      std::vector<Guard> flat;
      flatten(*this, kind(), flat);
      std::vector<Guard> kept;
      kept.reserve(flat.size());
      for (const Guard& g : flat) {
        Guard n = g.normalized();
        if (n.is_constant()) {
          // Absorbing element short-circuits the whole chain.
          if (n.constant_value() != is_and) return constant(!is_and);
          continue;  // neutral element
        }
        kept.push_back(std::move(n));
      }
      return rebuild_chain(kind(), std::move(kept), is_and);
    }
    case Kind::Implies: {
      Guard l = left().normalized();
      Guard r = right().normalized();
      if (l.is_false() || r.is_true()) return constant(true);
      if (l.is_true()) return r;
      if (r.is_false()) return negation(std::move(l)).normalized();
      if (l == r) return constant(true);
      return implication(std::move(l), std::move(r));
    }
  }
  return *this;
}

int Guard::compare(const Guard& a, const Guard& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const:
      return a.constant_value() == b.constant_value() ? 0 : (a.constant_value() ? 1 : -1);
    case Kind::Var:
      return a.variable().compare(b.variable());
    case Kind::Not:
      return compare(a.operand(), b.operand());
    default: {
      int c = compare(a.left(), b.left());
      if (c != 0) return c;
      return compare(a.right(), b.right());
    }
  }
}

namespace {

// Precedence for printing: implies < or < and < not/atom.
int precedence(Guard::Kind kind) {
  switch (kind) {
    case Guard::Kind::Implies:
      return 1;
    case Guard::Kind::Or:
      return 2;
    case Guard::Kind::And:
      return 3;
    default:
      return 4;
  }
}

void print(const Guard& g, int parent_prec, std::string& out) {
  const int prec = precedence(g.kind());
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (g.kind()) {
    case Guard::Kind::Const:
      out += g.constant_value() ? "true" : "false";
      break;
    case Guard::Kind::Var:
      out += g.variable();
      break;
    case Guard::Kind::Not:
      out += '!';
      print(g.operand(), 4, out);
      break;
    case Guard::Kind::And:
      print(g.left(), 3, out);
      out += " && ";
      print(g.right(), 4, out);
      break;
    case Guard::Kind::Or:
      print(g.left(), 2, out);
      out += " || ";
      print(g.right(), 3, out);
      break;
    case Guard::Kind::Implies:
      print(g.left(), 2, out);
      out += " -> ";
      print(g.right(), 1, out);  // right-associative
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Guard::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

bool evaluate_guard(const Guard& guard, const BoolAssignment& assignment) { return guard.evaluate(assignment); }

}  // namespace mdl
