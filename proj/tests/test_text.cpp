#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mdl/errors.hpp"
#include "mdl/term.hpp"
#include "mdl/text.hpp"
#include "support/oracles.hpp"

using namespace mdl;

TEST_CASE("terms parse per the grammar") {
  // Bob's output to Carol.
  const Term bc = parse_term("(: share(z): { quote: string, money: int } :)");
  REQUIRE(bc.kind() == TermKind::Choice);
  REQUIRE(bc.elements().size() == 1);
  CHECK(bc.elements()[0].label == "share");
  CHECK(bc.elements()[0].guard == parse_guard("z"));
  CHECK(bc.elements()[0].term() == parse_term("{quote: string, money: int}"));

  CHECK(parse_term("{}").is_nil());
  CHECK(parse_term("(: :)").is_none());

  const Term guarded = parse_term("{ a(x && y): string, c(x): int | $tail }");
  REQUIRE(guarded.kind() == TermKind::Record);
  REQUIRE(guarded.elements().size() == 2);
  CHECK(guarded.elements()[0].guard == parse_guard("x && y"));
  CHECK(guarded.tail() == std::optional<std::string>("tail"));

  const Term tup = parse_term("(int, (str, {a: int}))");
  REQUIRE(tup.kind() == TermKind::Tuple);
  CHECK(tup.items().size() == 2);

  const Term sw = parse_term("<a -> b: int, !(a -> b): {p: str}>");
  REQUIRE(sw.kind() == TermKind::Switch);
  CHECK(sw.alternatives().size() == 2);

  CHECK(parse_term("$v").kind() == TermKind::DownVar);
  CHECK(parse_term("^u").kind() == TermKind::UpVar);
  CHECK(parse_term("{ | $t}") == Term::record({}, "t"));
  CHECK(parse_term("(: | ^t :)") == Term::choice({}, "t"));
}

TEST_CASE("every production has a rejecting case") {
  // symbol / variables
  CHECK_THROWS_AS(parse_term("$"), ParseError);
  CHECK_THROWS_AS(parse_term("^"), ParseError);
  CHECK_THROWS_AS(parse_term("123"), ParseError);
  // tuple
  CHECK_THROWS_AS(parse_term("()"), ParseError);
  CHECK_THROWS_AS(parse_term("(int,)"), ParseError);
  CHECK_THROWS_AS(parse_term("(int"), ParseError);
  // record
  CHECK_THROWS_AS(parse_term("{a: int"), ParseError);
  CHECK_THROWS_AS(parse_term("{a int}"), ParseError);
  CHECK_THROWS_AS(parse_term("{a: int,}"), ParseError);
  CHECK_THROWS_AS(parse_term("{a: int | $t, b: int}"), ParseError);
  // choice
  CHECK_THROWS_AS(parse_term("(: a: int"), ParseError);
  CHECK_THROWS_AS(parse_term("(: a :)"), ParseError);
  // switch
  CHECK_THROWS_AS(parse_term("<>"), ParseError);
  CHECK_THROWS_AS(parse_term("<x int>"), ParseError);
  CHECK_THROWS_AS(parse_term("<x: int,>"), ParseError);
  // guards
  CHECK_THROWS_AS(parse_term("{a(x &&): int}"), ParseError);
  CHECK_THROWS_AS(parse_term("{a((x): int}"), ParseError);
  // trailing garbage
  CHECK_THROWS_AS(parse_term("int int"), ParseError);
}

TEST_CASE("ill-sorted tails are rejected with sort diagnostics") {
  CHECK_THROWS_AS(parse_term("{a: int | ^u}"), ParseError);
  CHECK_THROWS_AS(parse_term("(: a: int | $v :)"), ParseError);
}

TEST_CASE("parse errors carry spans and expectations") {
  try {
    parse_term("{a:\n   int,, b: str}", "sample.mdlc");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
    CHECK(e.span.file != nullptr);
    CHECK(*e.span.file == "sample.mdlc");
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("constraint files parse with comments and spans") {
  const char* src =
      "// a comment\n"
      "int <= {};  // trailing\n"
      "\n"
      "(: a: int :) <= (: a: int, b: str | ^u :);\n";
  const auto items = parse_constraint_file(src, "demo.mdlc");
  REQUIRE(items.size() == 2);
  CHECK(items[0].lhs == parse_term("int"));
  CHECK(items[0].rhs.is_nil());
  CHECK(items[0].span.line == 2);
  CHECK(items[1].span.line == 4);
  CHECK(items[1].rhs.tail() == std::optional<std::string>("u"));

  CHECK_THROWS_AS(parse_constraint_file("int <= str", "x"), ParseError);   // missing ';'
  CHECK_THROWS_AS(parse_constraint_file("int < str;", "x"), ParseError);   // wrong operator
  CHECK_THROWS_AS(parse_constraint_file("<= str;", "x"), ParseError);
}

TEST_CASE("printing follows the canonical layout") {
  CHECK(print_term(parse_term("{}")) == "{}");
  CHECK(print_term(parse_term("(:  :)")) == "(: :)");
  CHECK(print_term(parse_term("{ a ( x&&y ) : string , c ( x ) : int | $tail }")) ==
        "{a(x && y): string, c(x): int | $tail}");
  CHECK(print_term(parse_term("(:share(z):{quote:string,money:int}|^ct2:)")) ==
        "(: share(z): {quote: string, money: int} | ^ct2 :)");
  CHECK(print_term(parse_term("<x:int,!x:(int,str)>")) == "<x: int, !x: (int, str)>");
  CHECK(print_term(parse_term("{a(true): int}")) == "{a: int}");
  CHECK(print_guard(parse_guard("x->y->z")) == "x -> y -> z");
  CHECK(print_guard(parse_guard("(x->y)->z")) == "(x -> y) -> z");
  CHECK(print_guard(parse_guard("!(a||b)&&c")) == "!(a || b) && c");
}

TEST_CASE("parse after print is the identity on random terms") {
  std::mt19937 rng(1234);
  oracle::TermGenOptions opt;
  opt.bvars = {"x", "y"};
  opt.downvars = {"v", "w"};
  opt.upvars = {"u"};
  opt.allow_switch = true;
  opt.allow_tail = true;
  for (int i = 0; i < 500; ++i) {
    const Term t = oracle::roll(rng, 4) == 0 ? oracle::random_choice_term(rng, opt, 3)
                                             : oracle::random_down_term(rng, opt, 3);
    const std::string text = print_term(t);
    CAPTURE(text);
    const Term back = parse_term(text);
    CHECK(back == t);
    // print o parse is the identity on pretty-printed text.
    CHECK(print_term(back) == text);
  }
}

TEST_CASE("spans nest properly") {
  const Term t = parse_term("{outer: {inner: int}}", "spans.mdlc");
  const Term& inner = t.elements()[0].term();
  CHECK(t.span().byte_begin == 0);
  CHECK(t.span().byte_end == 21);
  CHECK(inner.span().byte_begin > t.span().byte_begin);
  CHECK(inner.span().byte_end < t.span().byte_end);
  CHECK(t.span().line == 1);
  CHECK(inner.span().column > t.span().column);
}
