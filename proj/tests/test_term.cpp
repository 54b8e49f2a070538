#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mdl/errors.hpp"
#include "mdl/term.hpp"
#include "mdl/text.hpp"
#include "support/oracles.hpp"

using namespace mdl;

namespace {
Term T(const char* src) { return parse_term(src); }
Guard G(const char* src) { return parse_guard(src); }
}  // namespace

TEST_CASE("guard evaluation matches the spec examples") {
  CHECK_FALSE(evaluate_guard(G("x && y"), {{"x", true}, {"y", false}}));
  CHECK(evaluate_guard(G("x -> y"), {{"x", false}, {"y", false}}));
  CHECK(evaluate_guard(G("true"), {}));
  CHECK_THROWS_AS(evaluate_guard(G("x || missing"), {{"x", false}}), MissingVariableError);
}

TEST_CASE("guard evaluation agrees with a truth-table oracle") {
  const std::vector<std::string> vars{"p", "q", "r", "s", "t", "u"};
  std::mt19937 rng(20240811);
  for (int round = 0; round < 300; ++round) {
    const Guard g = oracle::random_guard(rng, vars, 4);
    const Guard n = g.normalized();
    for (const BoolAssignment& a : oracle::all_assignments(g.variables())) {
      // Oracle: recursive evaluation written against the connective tables.
      struct Eval {
        const BoolAssignment& a;
        bool run(const Guard& g) const {
          switch (g.kind()) {
            case Guard::Kind::Const:
              return g.constant_value();
            case Guard::Kind::Var:
              return a.at(g.variable());
            case Guard::Kind::Not:
              return !run(g.operand());
            case Guard::Kind::And:
              return run(g.left()) & run(g.right());
            case Guard::Kind::Or:
              return run(g.left()) | run(g.right());
            case Guard::Kind::Implies:
              return !run(g.left()) | run(g.right());
          }
          return false;
        }
      } eval{a};
      CHECK(g.evaluate(a) == eval.run(g));
      // Normalization preserves semantics (full assignments only).
      BoolAssignment full = a;
      for (const std::string& v : vars) full.emplace(v, false);
      CHECK(n.evaluate(full) == g.evaluate(full));
    }
  }
}

TEST_CASE("collect_variables walks guards and terms in preorder") {
  CHECK(collect_variables(T("int")).empty());

  VariableInventory inv = collect_variables(T("{a(x): $v | $w}"));
  CHECK(inv.bvars == std::vector<std::string>{"x"});
  CHECK(inv.downvars == std::vector<std::string>{"v", "w"});
  CHECK(inv.upvars.empty());

  // Alice's output interface: b-variables x and y, one down variable.
  const Term as_out = T(
      "(: request: {title: $tv},"
      "  payment: {title: $tv, money: int, id: int},"
      "  share(x): {title: $tv, money: int},"
      "  suggest(y): {title: $tv} :)");
  inv = collect_variables(as_out);
  CHECK(inv.bvars == std::vector<std::string>{"x", "y"});
  CHECK(inv.downvars == std::vector<std::string>{"tv"});
  CHECK(inv.upvars.empty());
}

TEST_CASE("ground and semi-ground classification") {
  CHECK(is_ground(T("int")));
  CHECK(is_semi_ground(T("int")));
  CHECK(is_semi_ground(T("{a(x): int}")));
  CHECK_FALSE(is_ground(T("{a(x): int}")));
  CHECK_FALSE(is_semi_ground(T("{a: $v}")));
  CHECK_FALSE(is_ground(T("{a: $v}")));
  CHECK_FALSE(is_semi_ground(T("(: a: int | ^u :)")));
}

TEST_CASE("substitution replaces t-variables and splices tails") {
  TermSubstitution s1;
  s1.down.emplace("v", T("{b: int}"));
  CHECK(substitute(T("{a: $v}"), s1) == T("{a: {b: int}}"));

  TermSubstitution s2;
  s2.down.emplace("w", T("{q: str}"));
  CHECK(substitute(T("{p: int | $w}"), s2) == T("{p: int, q: str}"));

  // Seller's output tail: the instantiated choice splices into the host.
  TermSubstitution s3;
  s3.up.emplace("ct1", T("(: share: {title: string, money: int} :)"));
  CHECK(substitute(T("(: response: {title: string, money: int} | ^ct1 :)"), s3) ==
        T("(: response: {title: string, money: int}, share: {title: string, money: int} :)"));
}

TEST_CASE("substitution is simultaneous, not iterated") {
  TermSubstitution s;
  s.down.emplace("v", T("$w"));
  s.down.emplace("w", T("int"));
  CHECK(substitute(T("$v"), s) == T("$w"));
  CHECK(substitute(T("{x: $v, y: $w}"), s) == T("{x: $w, y: int}"));
}

TEST_CASE("substitution respects sorts") {
  TermSubstitution bad;
  bad.down.emplace("v", T("(: a: int :)"));
  CHECK_THROWS_AS(substitute(T("$v"), bad), SortError);

  TermSubstitution bad_tail;
  bad_tail.down.emplace("v", T("int"));
  CHECK_THROWS_AS(substitute(T("{a: int | $v}"), bad_tail), SortError);

  TermSubstitution up_bad;
  up_bad.up.emplace("u", T("{a: int}"));
  CHECK_THROWS_AS(substitute(T("^u"), up_bad), SortError);

  // Tail replaced by another variable renames the tail.
  TermSubstitution rename;
  rename.down.emplace("v", T("$w"));
  CHECK(substitute(T("{a: int | $v}"), rename) == T("{a: int | $w}"));
}

TEST_CASE("substituted guards fold to constants when fully assigned") {
  TermSubstitution s;
  s.bools = {{"x", true}, {"y", false}};
  const Term out = substitute(T("{a(x && y): int, b(x): str}"), s);
  REQUIRE(out.elements().size() == 2);
  CHECK(out.elements()[0].guard.is_false());
  CHECK(out.elements()[1].guard.is_true());
}

TEST_CASE("collected variables exclude substituted ones") {
  TermSubstitution s;
  s.down.emplace("v", T("{b: int}"));
  const Term out = substitute(T("{a: $v, c: $u}"), s);
  VariableInventory inv = collect_variables(out);
  CHECK(inv.downvars == std::vector<std::string>{"u"});
}

TEST_CASE("canonicalize drops false guards and resolves switches") {
  CHECK(canonicalize(T("{a(x && y): string, b(false): int, c(x): int}"), {{"x", true}, {"y", true}}) ==
        T("{a: string, c: int}"));
  CHECK(canonicalize(T("<false: int, true: str>")) == T("str"));
  CHECK(canonicalize(T("<x: int, !x: string>"), {{"x", true}}) == T("int"));
  CHECK(canonicalize(T("<x: int, !x: string>"), {{"x", false}}) == T("string"));
  CHECK_THROWS_AS(canonicalize(T("<x: int, y: str>"), {{"x", true}, {"y", true}}), IllFormedSwitchError);
  CHECK_THROWS_AS(canonicalize(T("<x: int, y: str>"), {{"x", false}, {"y", false}}), IllFormedSwitchError);
  CHECK_THROWS_AS(canonicalize(T("{a(x): int}")), MissingVariableError);
}

TEST_CASE("canonicalize is idempotent on random ground terms") {
  std::mt19937 rng(7);
  oracle::TermGenOptions opt;
  for (int i = 0; i < 200; ++i) {
    const Term t = oracle::random_down_term(rng, opt, 3);
    const Term once = canonicalize(t);
    CHECK(canonicalize(once) == once);
  }
}

TEST_CASE("well-formedness follows the recursive definition") {
  CHECK_FALSE(is_well_formed(T("{a: int, a: str}")));
  CHECK(is_well_formed(T("(: :)")));
  CHECK(is_well_formed(T("{}")));
  CHECK_FALSE(is_well_formed(T("<true: int, true: str>")));
  CHECK(is_well_formed(T("<true: int, false: str>")));
  CHECK(is_well_formed(T("{a(false): int, a: str}")));
  CHECK(is_well_formed(T("(int, {p: str})")));
  CHECK_FALSE(is_well_formed(T("(int, {p: str, p: int})")));
  CHECK_THROWS_AS(is_well_formed(T("{a: $v}")), NotGroundError);
  CHECK_THROWS_AS(is_well_formed(T("{a(x): int}")), NotGroundError);
}

TEST_CASE("well-formed ground terms canonicalize to switch-free terms") {
  std::mt19937 rng(99);
  oracle::TermGenOptions opt;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Term t = oracle::random_down_term(rng, opt, 3);
    if (!is_well_formed(t)) continue;
    ++checked;
    const Term canon = canonicalize(t);
    struct NoSwitch {
      static bool check(const Term& t) {
        switch (t.kind()) {
          case TermKind::Switch:
            return false;
          case TermKind::Tuple:
            for (const Term& i : t.items())
              if (!check(i)) return false;
            return true;
          case TermKind::Record:
          case TermKind::Choice:
            for (const Element& e : t.elements())
              if (!check(e.term())) return false;
            return true;
          default:
            return true;
        }
      }
    };
    CHECK(NoSwitch::check(canon));
  }
  CHECK(checked > 50);
}
