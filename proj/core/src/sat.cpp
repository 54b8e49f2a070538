#include "mdl/sat.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

#include "mdl/errors.hpp"

namespace mdl {

bool BoolConstraintSet::add(const Guard& formula, std::string provenance) {
  Guard normal = formula.normalized();
  note_variables(normal.variables());
  if (normal.is_true()) return false;
  for (const Guard& g : formulas_) {
    if (g == normal) return false;
  }
  formulas_.push_back(std::move(normal));
  provenance_.push_back(std::move(provenance));
  return true;
}

void BoolConstraintSet::note_variable(const std::string& name) {
  if (variable_index_.emplace(name, variables_.size()).second) variables_.push_back(name);
}

void BoolConstraintSet::note_variables(const std::vector<std::string>& names) {
  for (const std::string& name : names) note_variable(name);
}

bool BoolConstraintSet::contains(const Guard& formula) const {
  Guard normal = formula.normalized();
  return std::any_of(formulas_.begin(), formulas_.end(), [&](const Guard& g) { return g == normal; });
}

namespace {

// Negation-normal form over Const/Var/And/Or (Implies desugared).
Guard to_nnf(const Guard& g, bool negate) {
  switch (g.kind()) {
    case Guard::Kind::Const:
      return Guard::constant(negate ? !g.constant_value() : g.constant_value());
    case Guard::Kind::Var:
      return negate ? Guard::negation(g) : g;
    case Guard::Kind::Not:
      return to_nnf(g.operand(), !negate);
    case Guard::Kind::And:
      return negate ? Guard::disjunction(to_nnf(g.left(), true), to_nnf(g.right(), true))
                    : Guard::conjunction(to_nnf(g.left(), false), to_nnf(g.right(), false));
    case Guard::Kind::Or:
      return negate ? Guard::conjunction(to_nnf(g.left(), true), to_nnf(g.right(), true))
                    : Guard::disjunction(to_nnf(g.left(), false), to_nnf(g.right(), false));
    case Guard::Kind::Implies:
      return negate ? Guard::conjunction(to_nnf(g.left(), false), to_nnf(g.right(), true))
                    : Guard::disjunction(to_nnf(g.left(), true), to_nnf(g.right(), false));
  }
  return g;
}

struct CnfBuilder {
  Cnf cnf;
  std::map<std::string, int> index;

  int var_of(const std::string& name) {
    auto it = index.find(name);
    assert(it != index.end());
    return it->second;
  }

  int fresh_aux() { return ++cnf.variable_count; }

  // Literal for an NNF atom (variable or negated variable); 0 when not atomic.
  int atom_literal(const Guard& g) {
    if (g.kind() == Guard::Kind::Var) return var_of(g.variable());
    if (g.kind() == Guard::Kind::Not && g.operand().kind() == Guard::Kind::Var) {
      return -var_of(g.operand().variable());
    }
    return 0;
  }

  // Emits clauses asserting an NNF formula at top level.
  void assert_formula(const Guard& g) {
    if (g.kind() == Guard::Kind::And) {
      assert_formula(g.left());
      assert_formula(g.right());
      return;
    }
    std::vector<int> clause;
    bool tautology = false;
    collect_disjuncts(g, clause, tautology);
    if (tautology) return;
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (int lit : clause) {
      if (std::binary_search(clause.begin(), clause.end(), -lit)) return;  // p | !p
    }
    cnf.clauses.push_back(std::move(clause));
  }

  // Flattens a disjunction into literals, introducing a defined auxiliary for
  // each conjunctive disjunct (one-sided Tseitin encoding).
  void collect_disjuncts(const Guard& g, std::vector<int>& clause, bool& tautology) {
    switch (g.kind()) {
      case Guard::Kind::Const:
        if (g.constant_value()) tautology = true;
        // false contributes no literal
        return;
      case Guard::Kind::Or:
        collect_disjuncts(g.left(), clause, tautology);
        collect_disjuncts(g.right(), clause, tautology);
        return;
      case Guard::Kind::And: {
        const int aux = fresh_aux();
        define_conjunction(aux, g);
        clause.push_back(aux);
        return;
      }
      default: {
        const int lit = atom_literal(g);
        assert(lit != 0);
        clause.push_back(lit);
        return;
      }
    }
  }

  // aux -> every conjunct of g (recursively flattened).
  void define_conjunction(int aux, const Guard& g) {
    if (g.kind() == Guard::Kind::And) {
      define_conjunction(aux, g.left());
      define_conjunction(aux, g.right());
      return;
    }
    std::vector<int> clause{-aux};
    bool tautology = false;
    collect_disjuncts(g, clause, tautology);
    if (tautology) return;
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (int lit : clause) {
      if (std::binary_search(clause.begin(), clause.end(), -lit)) return;
    }
    cnf.clauses.push_back(std::move(clause));
  }
};

}  // namespace

Cnf to_cnf(const BoolConstraintSet& set) {
  CnfBuilder builder;
  builder.cnf.named_count = static_cast<int>(set.variables().size());
  builder.cnf.variable_count = builder.cnf.named_count;
  builder.cnf.names = set.variables();
  for (int i = 0; i < builder.cnf.named_count; ++i) builder.index.emplace(set.variables()[i], i + 1);
  for (const Guard& g : set.formulas()) {
    builder.assert_formula(to_nnf(g, false));
  }
  return builder.cnf;
}

namespace {

/// Iterative DPLL with two watched literals and chronological backtracking.
class DpllSolver {
 public:
  explicit DpllSolver(const Cnf& cnf)
      : variable_count_(cnf.variable_count), clauses_(cnf.clauses), assign_(cnf.variable_count + 1, Unassigned) {
    watches_.resize(2 * variable_count_ + 2);
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      const auto& clause = clauses_[ci];
      if (clause.empty()) {
        contradiction_ = true;
        return;
      }
      if (clause.size() == 1) {
        units_.push_back(clause[0]);
        continue;
      }
      watch(clause[0], ci);
      watch(clause[1], ci);
    }
  }

  std::optional<std::vector<bool>> run(const std::vector<int>& assumptions) {
    if (contradiction_) return std::nullopt;
    for (int lit : assumptions) {
      if (!enqueue(lit)) return std::nullopt;
    }
    for (int lit : units_) {
      if (!enqueue(lit)) return std::nullopt;
    }
    if (!propagate()) return std::nullopt;
    for (;;) {
      const int var = next_unassigned();
      if (var == 0) {
        std::vector<bool> out(variable_count_ + 1, false);
        for (int v = 1; v <= variable_count_; ++v) out[v] = assign_[v] == True;
        return out;
      }
      decide(-var);  // false-first polarity
      while (!propagate()) {
        if (!backtrack()) return std::nullopt;
      }
    }
  }

 private:
  enum Value : signed char { False = -1, Unassigned = 0, True = 1 };

  static std::size_t watch_slot(int lit) {
    const std::size_t var = static_cast<std::size_t>(lit > 0 ? lit : -lit);
    return 2 * var + (lit > 0 ? 0 : 1);
  }

  void watch(int lit, std::size_t clause_index) { watches_[watch_slot(lit)].push_back(clause_index); }

  Value value_of(int lit) const {
    const Value v = assign_[std::abs(lit)];
    if (v == Unassigned) return Unassigned;
    return (lit > 0) == (v == True) ? True : False;
  }

  bool enqueue(int lit) {
    const Value v = value_of(lit);
    if (v == True) return true;
    if (v == False) return false;
    assign_[std::abs(lit)] = lit > 0 ? True : False;
    trail_.push_back(lit);
    return true;
  }

  void decide(int lit) {
    decisions_.push_back({trail_.size(), lit});
    const bool ok = enqueue(lit);
    assert(ok);
    (void)ok;
  }

  // Watched-literal unit propagation over the trail queue.
  bool propagate() {
    while (queue_head_ < trail_.size()) {
      const int lit = trail_[queue_head_++];
      auto& watchers = watches_[watch_slot(-lit)];
      std::size_t kept = 0;
      for (std::size_t wi = 0; wi < watchers.size(); ++wi) {
        const std::size_t ci = watchers[wi];
        auto& clause = clauses_[ci];
        // Keep the false literal in slot 1.
        if (clause[0] == -lit) std::swap(clause[0], clause[1]);
        if (value_of(clause[0]) == True) {
          watchers[kept++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < clause.size(); ++k) {
          if (value_of(clause[k]) != False) {
            std::swap(clause[1], clause[k]);
            watch(clause[1], ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        watchers[kept++] = ci;
        if (!enqueue(clause[0])) {
          // Conflict: keep remaining watchers before bailing out.
          for (std::size_t rest = wi + 1; rest < watchers.size(); ++rest) watchers[kept++] = watchers[rest];
          watchers.resize(kept);
          return false;
        }
      }
      watchers.resize(kept);
    }
    return true;
  }

  bool backtrack() {
    while (!decisions_.empty()) {
      const auto [mark, lit] = decisions_.back();
      decisions_.pop_back();
      while (trail_.size() > mark) {
        assign_[std::abs(trail_.back())] = Unassigned;
        trail_.pop_back();
      }
      queue_head_ = trail_.size();
      if (lit < 0) {
        // The false branch failed; try true as a forced assignment at the
        // outer decision level.
        if (!enqueue(-lit)) continue;
        return true;
      }
    }
    return false;
  }

  int next_unassigned() const {
    for (int v = 1; v <= variable_count_; ++v) {
      if (assign_[v] == Unassigned) return v;
    }
    return 0;
  }

  int variable_count_;
  std::vector<std::vector<int>> clauses_;
  std::vector<Value> assign_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<int> trail_;
  std::size_t queue_head_ = 0;
  std::vector<std::pair<std::size_t, int>> decisions_;
  std::vector<int> units_;
  bool contradiction_ = false;
};

}  // namespace

std::optional<Model> solve(const BoolConstraintSet& set, const BoolAssignment& assumptions) {
  Cnf cnf = to_cnf(set);
  std::vector<int> assumed;
  std::map<std::string, int> index;
  for (int i = 0; i < cnf.named_count; ++i) index.emplace(cnf.names[i], i + 1);
  for (const auto& [name, value] : assumptions) {
    auto it = index.find(name);
    if (it == index.end()) continue;  // assumption about a variable outside the set
    assumed.push_back(value ? it->second : -it->second);
  }
  DpllSolver solver(cnf);
  auto result = solver.run(assumed);
  if (!result) return std::nullopt;
  Model model;
  for (int i = 0; i < cnf.named_count; ++i) model.values[cnf.names[i]] = (*result)[i + 1];
  // Assumptions over variables unknown to the set are echoed back so the
  // model stays total for the caller.
  for (const auto& [name, value] : assumptions) model.values.emplace(name, value);
  return model;
}

bool entails(const BoolConstraintSet& set, const Guard& formula) {
  BoolConstraintSet probe = set;
  probe.add(Guard::negation(formula));
  return !solve(probe).has_value();
}

bool models_equivalent(const BoolConstraintSet& a, const BoolConstraintSet& b) {
  Guard conj_a = Guard::conjunction_of(a.formulas());
  Guard conj_b = Guard::conjunction_of(b.formulas());
  BoolConstraintSet left = a;
  left.note_variables(b.variables());
  BoolConstraintSet right = b;
  right.note_variables(a.variables());
  if (solve([&] {
        BoolConstraintSet probe = left;
        probe.add(Guard::negation(conj_b));
        return probe;
      }())
          .has_value()) {
    return false;
  }
  if (solve([&] {
        BoolConstraintSet probe = right;
        probe.add(Guard::negation(conj_a));
        return probe;
      }())
          .has_value()) {
    return false;
  }
  return true;
}

void write_dimacs(const Cnf& cnf, std::ostream& out) {
  out << "p cnf " << cnf.variable_count << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

void write_dimacs_names(const Cnf& cnf, std::ostream& out) {
  for (int i = 0; i < cnf.named_count; ++i) {
    out << (i + 1) << ' ' << cnf.names[i] << '\n';
  }
}

}  // namespace mdl
