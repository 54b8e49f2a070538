#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mdl/errors.hpp"
#include "mdl/lattice.hpp"
#include "mdl/text.hpp"
#include "support/oracles.hpp"

using namespace mdl;

namespace {
Term T(const char* src) { return parse_term(src); }
LatticePoint V(const char* src) { return LatticePoint::value(parse_term(src)); }
}  // namespace

TEST_CASE("seniority matches the hand-derived examples") {
  CHECK(is_senior(T("{a: int, b: str}"), T("{a: int}")));
  CHECK_FALSE(is_senior(T("{a: int}"), T("{a: int, b: str}")));
  CHECK(is_senior(T("(: a: int :)"), T("(: a: int, b: str :)")));
  CHECK_FALSE(is_senior(T("(: a: int, b: str :)"), T("(: a: int :)")));
  // Seller ignores the id Alice provides; the interconnection stays valid.
  CHECK(is_senior(T("{title: str, money: int, id: int}"), T("{title: str, money: int}")));
  CHECK(is_senior(T("int"), T("{}")));
  CHECK(is_senior(T("(: :)"), T("(: :)")));
  CHECK(is_senior(T("(: :)"), T("(: a: int :)")));
  CHECK_FALSE(is_senior(T("{}"), T("int")));
  CHECK_FALSE(is_senior(T("int"), T("(: a: int :)")));
  CHECK(is_senior(T("(int, str)"), T("(int, {})")));
  CHECK_FALSE(is_senior(T("(int, str)"), T("(int, str, int)")));
}

TEST_CASE("seniority is a partial order on the enumerated universe") {
  for (const std::vector<Term>& universe : {oracle::down_universe(), oracle::up_universe()}) {
    for (const Term& t : universe) CHECK(is_senior(t, t));
    for (const Term& t1 : universe) {
      for (const Term& t2 : universe) {
        if (is_senior(t1, t2) && is_senior(t2, t1)) CHECK(t1 == t2);
      }
    }
    // Transitivity: restrict the cubic scan to related pairs.
    std::vector<std::pair<std::size_t, std::size_t>> le;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      for (std::size_t j = 0; j < universe.size(); ++j) {
        if (is_senior(universe[i], universe[j])) le.emplace_back(i, j);
      }
    }
    for (const auto& [i, j] : le) {
      for (std::size_t k = 0; k < universe.size(); ++k) {
        if (is_senior(universe[j], universe[k])) CHECK(is_senior(universe[i], universe[k]));
      }
    }
  }
}

TEST_CASE("meet follows the examples") {
  CHECK(meet(V("{}"), V("{a: int}")) == V("{a: int}"));
  CHECK(meet(V("{a: int}"), V("{}")) == V("{a: int}"));
  CHECK(meet(V("{a: int}"), V("{b: str}")) == V("{a: int, b: str}"));
  CHECK(meet(V("int"), V("str")) == LatticePoint::bottom());
  CHECK(meet(LatticePoint::bottom(), V("int")) == LatticePoint::bottom());
  CHECK(meet(V("(int, str)"), V("(int, str, int)")) == LatticePoint::bottom());
  CHECK(meet(V("(int, {})"), V("(int, {a: str})")) == V("(int, {a: str})"));
  CHECK(meet(V("{a: int}"), V("(int)")) == LatticePoint::bottom());
  CHECK_THROWS_AS(meet(V("(: a: int :)"), V("{}")), SortError);
  CHECK_THROWS_AS(meet(LatticePoint::top(), V("{}")), SortError);
}

TEST_CASE("join follows the examples") {
  CHECK(join(V("(: :)"), V("(: a: int :)")) == V("(: a: int :)"));
  CHECK(join(V("(: a: int :)"), V("(: b: str :)")) == V("(: a: int, b: str :)"));
  CHECK(join(V("(: a: {p: int, q: str} :)"), V("(: a: {p: int} :)")) == V("(: a: {p: int} :)"));
  CHECK(join(V("(: a: int :)"), V("(: a: str :)")) == V("(: a: {} :)"));
  CHECK(join(LatticePoint::top(), V("(: :)")) == LatticePoint::top());
  CHECK_THROWS_AS(join(V("{}"), V("(: :)")), SortError);
  CHECK_THROWS_AS(join(LatticePoint::bottom(), V("(: :)")), SortError);
}

TEST_CASE("meet and join satisfy the semilattice laws on the enumeration") {
  const std::vector<Term> downs = oracle::down_universe();
  const std::vector<Term> ups = oracle::up_universe();

  for (const Term& t : downs) {
    const LatticePoint p = LatticePoint::value(t);
    CHECK(meet(p, p) == p);
  }
  for (const Term& t : ups) {
    const LatticePoint p = LatticePoint::value(t);
    CHECK(join(p, p) == p);
  }
  // Commutativity + associativity on a pseudo-random sample of triples.
  std::mt19937 rng(5);
  auto sample = [&rng](const std::vector<Term>& u) -> const Term& {
    return u[std::uniform_int_distribution<std::size_t>(0, u.size() - 1)(rng)];
  };
  for (int i = 0; i < 3000; ++i) {
    const LatticePoint a = LatticePoint::value(sample(downs));
    const LatticePoint b = LatticePoint::value(sample(downs));
    const LatticePoint c = LatticePoint::value(sample(downs));
    CHECK(meet(a, b) == meet(b, a));
    CHECK(meet(meet(a, b), c) == meet(a, meet(b, c)));

    const LatticePoint x = LatticePoint::value(sample(ups));
    const LatticePoint y = LatticePoint::value(sample(ups));
    const LatticePoint z = LatticePoint::value(sample(ups));
    CHECK(join(x, y) == join(y, x));
    CHECK(join(join(x, y), z) == join(x, join(y, z)));
  }
}

TEST_CASE("the characterization links seniority with meet and join") {
  const std::vector<Term> downs = oracle::down_universe();
  for (const Term& t1 : downs) {
    for (const Term& t2 : downs) {
      const bool related = is_senior(t1, t2);
      const bool characterized = meet(LatticePoint::value(t1), LatticePoint::value(t2)) == LatticePoint::value(t1);
      CHECK(related == characterized);
    }
  }
  const std::vector<Term> ups = oracle::up_universe();
  for (const Term& t1 : ups) {
    for (const Term& t2 : ups) {
      const bool related = is_senior(t1, t2);
      const bool characterized = join(LatticePoint::value(t1), LatticePoint::value(t2)) == LatticePoint::value(t2);
      CHECK(related == characterized);
    }
  }
}

TEST_CASE("meet is the greatest lower bound and join the least upper bound") {
  const std::vector<Term> downs = oracle::down_universe();
  for (const Term& t1 : downs) {
    for (const Term& t2 : downs) {
      const LatticePoint m = meet(LatticePoint::value(t1), LatticePoint::value(t2));
      if (m.is_value()) {
        CHECK(is_senior(m.term(), t1));
        CHECK(is_senior(m.term(), t2));
      }
      for (const Term& lower : downs) {
        if (is_senior(lower, t1) && is_senior(lower, t2)) {
          REQUIRE(m.is_value());
          CHECK(is_senior(lower, m.term()));
        }
      }
    }
  }
  const std::vector<Term> ups = oracle::up_universe();
  for (const Term& t1 : ups) {
    for (const Term& t2 : ups) {
      const LatticePoint j = join(LatticePoint::value(t1), LatticePoint::value(t2));
      REQUIRE(j.is_value());
      CHECK(is_senior(t1, j.term()));
      CHECK(is_senior(t2, j.term()));
      for (const Term& upper : ups) {
        if (is_senior(t1, upper) && is_senior(t2, upper)) CHECK(is_senior(j.term(), upper));
      }
    }
  }
}

TEST_CASE("vector operations apply pointwise and respect sentinels") {
  VariableInventory inv;
  inv.merge_from(T("{x: $v, y: $w}"));
  inv.merge_from(T("(: p: int | ^u :)"));
  ApproximationVector initial = ApproximationVector::initial(inv);
  REQUIRE(initial.down.size() == 2);
  REQUIRE(initial.up.size() == 1);

  CHECK(vector_combine(initial, initial) == initial);
  CHECK(vector_leq(initial, initial));

  ApproximationVector collapsed = initial;
  collapsed.collapse();
  CHECK(collapsed.collapsed());
  CHECK(vector_leq(collapsed, collapsed));
  // Bottom slots sit below every down value; Top slots above every up value.
  for (const LatticePoint& p : initial.down) CHECK(point_leq(LatticePoint::bottom(), p));
  for (const LatticePoint& p : initial.up) CHECK(point_leq(p, LatticePoint::top()));
  CHECK_FALSE(vector_leq(initial, collapsed));

  CHECK_THROWS_AS(vector_meet(initial.down, std::vector<LatticePoint>{}), LengthMismatchError);

  // Pointwise consistency with the scalar operations on random small vectors.
  const std::vector<Term> downs = oracle::down_universe();
  const std::vector<Term> ups = oracle::up_universe();
  std::mt19937 rng(17);
  auto sample = [&rng](const std::vector<Term>& u) {
    return u[std::uniform_int_distribution<std::size_t>(0, u.size() - 1)(rng)];
  };
  for (int i = 0; i < 500; ++i) {
    std::vector<LatticePoint> a, b;
    for (int k = 0; k < 3; ++k) {
      a.push_back(LatticePoint::value(sample(downs)));
      b.push_back(LatticePoint::value(sample(downs)));
    }
    const std::vector<LatticePoint> m = vector_meet(a, b);
    for (int k = 0; k < 3; ++k) CHECK(m[static_cast<std::size_t>(k)] == meet(a[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)]));

    std::vector<LatticePoint> ua, ub;
    for (int k = 0; k < 3; ++k) {
      ua.push_back(LatticePoint::value(sample(ups)));
      ub.push_back(LatticePoint::value(sample(ups)));
    }
    const std::vector<LatticePoint> j = vector_join(ua, ub);
    for (int k = 0; k < 3; ++k) CHECK(j[static_cast<std::size_t>(k)] == join(ua[static_cast<std::size_t>(k)], ub[static_cast<std::size_t>(k)]));
  }
}

TEST_CASE("bottom and top absorb") {
  const std::vector<Term> downs = oracle::down_universe();
  for (const Term& t : downs) {
    CHECK(meet(LatticePoint::bottom(), LatticePoint::value(t)) == LatticePoint::bottom());
    CHECK(point_leq(LatticePoint::bottom(), LatticePoint::value(t)));
  }
  const std::vector<Term> ups = oracle::up_universe();
  for (const Term& t : ups) {
    CHECK(join(LatticePoint::top(), LatticePoint::value(t)) == LatticePoint::top());
    CHECK(point_leq(LatticePoint::value(t), LatticePoint::top()));
  }
}
