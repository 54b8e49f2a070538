#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mdl/constraints.hpp"
#include "mdl/errors.hpp"
#include "mdl/text.hpp"
#include "support/oracles.hpp"

using namespace mdl;

namespace {
Term T(const char* src) { return parse_term(src); }

std::set<std::string> formula_set(const std::vector<Guard>& guards) {
  std::set<std::string> out;
  for (const Guard& g : guards) out.insert(g.to_string());
  return out;
}
}  // namespace

TEST_CASE("well-formedness constraints per construct") {
  // Symbols and bare variables contribute nothing.
  CHECK(wfc(T("int")).empty());
  CHECK(wfc(T("$v")).empty());

  // Tuples recurse into their items.
  CHECK(formula_set(wfc(T("({a(x): int, a(y): str}, int)"))) == std::set<std::string>{"!(x && y)"});

  // Records and choices exclude duplicate labels pairwise and guard the
  // recursion into payloads.
  CHECK(formula_set(wfc(T("{a(x): int, a(y): str}"))) == std::set<std::string>{"!(x && y)"});
  CHECK(formula_set(wfc(T("{a(x): int, b(y): str}"))).empty());
  CHECK(formula_set(wfc(T("{outer(g): {a(x): int, a(y): str}}"))) ==
        std::set<std::string>{"g -> !(x && y)"});

  // Switches add mutual exclusion over all pairs plus the covering clause.
  CHECK(formula_set(wfc(T("<x: int, y: str>"))) == std::set<std::string>{"!(x && y)", "x || y"});
  CHECK(formula_set(wfc(T("<x: int, y: str, z: {}>"))) ==
        std::set<std::string>{"!(x && y)", "!(x && z)", "!(y && z)", "x || y || z"});
  CHECK(formula_set(wfc(T("<x: {a(p): int, a(q): str}, y: int>"))) ==
        std::set<std::string>{"!(x && y)", "x || y", "x -> !(p && q)"});

  // An unresolved tail contributes nothing.
  CHECK(formula_set(wfc(T("{a(x): int, a(y): str | $t}"))) == std::set<std::string>{"!(x && y)"});
}

TEST_CASE("seniority constraints per rule") {
  // 1: equal symbols are vacuous; 7: everything unrelated is false.
  CHECK(sc(T("int"), T("int")).empty());
  CHECK(formula_set(sc(T("int"), T("str"))) == std::set<std::string>{"false"});
  CHECK(formula_set(sc(T("(int)"), T("(int, int)"))) == std::set<std::string>{"false"});
  CHECK(formula_set(sc(T("(: a: int :)"), T("{a: int}"))) == std::set<std::string>{"false"});

  // 2: tuples recurse pointwise.
  CHECK(sc(T("(int, str)"), T("(int, str)")).empty());
  CHECK(formula_set(sc(T("(int, {a(w): int})"), T("(int, {})"))).empty());
  CHECK(formula_set(sc(T("(int, int)"), T("(int, str)"))) == std::set<std::string>{"false"});

  // 3: records, per right element. Unmatched labels force the right guard
  // off; matched ones recurse under both guards and demand existence.
  CHECK(formula_set(sc(T("{}"), T("{b(w): int}"))) == std::set<std::string>{"!w"});
  CHECK(formula_set(sc(T("{b(v): int}"), T("{b(w): int}"))) == std::set<std::string>{"w -> v"});
  CHECK(formula_set(sc(T("{b(v): int}"), T("{b(w): str}"))) ==
        std::set<std::string>{"w -> v", "!(v && w)"});
  CHECK(formula_set(sc(T("{a: {}, b: int}"), T("{a: {q(u): str}}"))) == std::set<std::string>{"!u"});
  // Symbols and tuples behave as element-less records against a record.
  CHECK(sc(T("int"), T("{}")).empty());
  CHECK(formula_set(sc(T("int"), T("{b(w): int}"))) == std::set<std::string>{"!w"});
  CHECK(formula_set(sc(T("(int)"), T("{b: int}"))) == std::set<std::string>{"false"});

  // 4: choices, per left element (dual).
  CHECK(formula_set(sc(T("(: suggest(y): {title: str} :)"), T("(: request: {title: str}, payment: {} :)"))) ==
        std::set<std::string>{"!y"});
  CHECK(formula_set(sc(T("(: share(x): {} :)"), T("(: share(z): {} :)"))) == std::set<std::string>{"x -> z"});
  CHECK(sc(T("(: :)"), T("(: a: int :)")).empty());

  // 5/6: switches distribute their guards as implications; constant folding
  // turns `g -> false` into `!g`.
  CHECK(formula_set(sc(T("<x: int, !x: str>"), T("int"))) == std::set<std::string>{"x"});
  CHECK(formula_set(sc(T("str"), T("<x: int, !x: str>"))) == std::set<std::string>{"!x"});
  // The cross alternatives (int vs str) are impossible, each under the
  // conjunction of its switch guards.
  CHECK(formula_set(sc(T("<x: int, !x: str>"), T("<y: int, !y: str>"))) ==
        std::set<std::string>{"!(x && !y)", "!(y && !x)"});
}

TEST_CASE("generation is deterministic with full provenance") {
  const Term lhs = T("(: share(x): {title: str}, suggest(y): {t: str} :)");
  const Term rhs = T("(: share(z): {title: str} :)");
  const auto first = sc_provenanced(lhs, rhs, "channel#1");
  const auto second = sc_provenanced(lhs, rhs, "channel#1");
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].formula == second[i].formula);
    CHECK(first[i].provenance == second[i].provenance);
    CHECK(!first[i].provenance.empty());
    CHECK(first[i].provenance.rfind("channel#1", 0) == 0);
  }
}

TEST_CASE("wfc soundness: formulas hold exactly for well-formed instances") {
  std::mt19937 rng(31337);
  oracle::TermGenOptions opt;
  opt.bvars = {"p", "q", "r", "s", "t"};
  opt.allow_switch = true;
  int interesting = 0;
  for (int round = 0; round < 400; ++round) {
    const Term t = oracle::random_down_term(rng, opt, 3);
    const std::vector<Guard> formulas = wfc(t);
    VariableInventory inv = collect_variables(t);
    if (!formulas.empty()) ++interesting;
    for (const BoolAssignment& a : oracle::all_assignments(inv.bvars)) {
      bool formulas_hold = true;
      for (const Guard& g : formulas) formulas_hold = formulas_hold && g.evaluate(a);
      TermSubstitution subst{a, {}, {}};
      const bool well_formed = is_well_formed(substitute(t, subst));
      CHECK(well_formed == formulas_hold);
    }
  }
  CHECK(interesting > 30);
}

TEST_CASE("sc soundness: under well-formedness, formulas hold exactly for senior instances") {
  std::mt19937 rng(271828);
  oracle::TermGenOptions opt;
  opt.bvars = {"p", "q", "r", "s", "t"};
  opt.allow_switch = true;
  int pairs_checked = 0;
  for (int round = 0; round < 500; ++round) {
    const bool up = oracle::roll(rng, 3) == 0;
    const Term t1 = up ? oracle::random_choice_term(rng, opt, 2) : oracle::random_down_term(rng, opt, 2);
    const Term t2 = up ? oracle::random_choice_term(rng, opt, 2) : oracle::random_down_term(rng, opt, 2);
    const std::vector<Guard> wf1 = wfc(t1);
    const std::vector<Guard> wf2 = wfc(t2);
    const std::vector<Guard> formulas = sc(t1, t2);
    VariableInventory inv;
    inv.merge_from(t1);
    inv.merge_from(t2);
    for (const BoolAssignment& a : oracle::all_assignments(inv.bvars)) {
      bool wf_hold = true;
      for (const Guard& g : wf1) wf_hold = wf_hold && g.evaluate(a);
      for (const Guard& g : wf2) wf_hold = wf_hold && g.evaluate(a);
      if (!wf_hold) continue;  // soundness is stated under well-formedness
      ++pairs_checked;
      bool sc_hold = true;
      for (const Guard& g : formulas) sc_hold = sc_hold && g.evaluate(a);
      TermSubstitution subst{a, {}, {}};
      const bool senior = is_senior(canonicalize(substitute(t1, subst)), canonicalize(substitute(t2, subst)));
      CHECK(senior == sc_hold);
    }
  }
  CHECK(pairs_checked > 1000);
}

TEST_CASE("sc rejects live t-variables") {
  CHECK_THROWS_AS(sc(T("$v"), T("{}")), SortError);
  CHECK_THROWS_AS(sc(T("{a: $v}"), T("{a: int}")), SortError);
}
