#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lsodot/metatheory.hpp"

using namespace testing_helpers;
using lsodot::ParseError;
using lsodot::TermKind;

TEST(ParseProposition, PrecedenceAndAssociativity) {
  EXPECT_EQ(prop("unit -> unit -> unit"),
            Proposition::imp(Proposition::top(), Proposition::imp(Proposition::top(), Proposition::top())));
  EXPECT_EQ(prop("unit & unit | void"),
            Proposition::disj(Proposition::conj(Proposition::top(), Proposition::top()), Proposition::bot()));
  EXPECT_EQ(prop("(unit @ unit) @ unit"), Proposition::sup(prop("unit @ unit"), Proposition::top()));
  for (const char* s : {"unit", "void", "unit -> unit", "(unit -> unit) -> unit", "unit & (unit & unit)",
                        "(unit | void) & unit", "unit @ unit -> unit & unit"}) {
    EXPECT_EQ(prop(toString(prop(s))), prop(s)) << s;
  }
}

TEST(ParseTerm, BasicForms) {
  Q two = term("{2}.*");
  ASSERT_TRUE(two.is(TermKind::Star));
  EXPECT_EQ(two.scalar(), q(2));

  Q lam = term("\\x:unit. x");
  ASSERT_TRUE(lam.is(TermKind::Lam));
  EXPECT_EQ(lam.binderOf(0), "x");
  EXPECT_EQ(lam.annotation(), Proposition::top());
  EXPECT_TRUE(lam.child(0).is(TermKind::Var));

  Q d = term("dtop({2}.*, {3}.*)");
  ASSERT_TRUE(d.is(TermKind::DTop));
  EXPECT_EQ(d.child(0).scalar(), q(2));
  EXPECT_EQ(d.child(1).scalar(), q(3));
}

TEST(ParseTerm, EveryConstructor) {
  const char* src =
      "\\x:(unit & unit) | unit. dor(x, a. dand1(a, b. b), c. dtop(c, {1}.*))";
  Q t = term(src);
  EXPECT_EQ(t.child(0).kind(), TermKind::DOr);
  EXPECT_EQ(term("[{1}.*, {2}.*] >< [{3}.*, {4}.*]").kind(), TermKind::Tensor);
  EXPECT_EQ(term("dsup([{1}.*, {2}.*], y. y, z. z)").kind(), TermKind::DSup);
  EXPECT_EQ(term("dsup1([{1}.*, {2}.*], y. y)").kind(), TermKind::DSup1);
  EXPECT_EQ(term("dbot[unit](v)").kind(), TermKind::DBot);
  EXPECT_EQ(term("inr[void]({1}.*)").kind(), TermKind::Inr);
  EXPECT_EQ(term("{1/2}*<{1}.*, {2}.*>").kind(), TermKind::Scal);
  EXPECT_EQ(term("f x y").child(0).kind(), TermKind::App);  // left-nested
}

TEST(ParseTerm, SpansPointIntoTheSource) {
  Q t = term("dtop(\n  {2}.*, y)");
  ASSERT_TRUE(t.child(1).span());
  EXPECT_EQ(t.child(1).span()->line, 2u);
  EXPECT_EQ(t.child(1).span()->column, 10u);
}

TEST(ParseTerm, CommentsBomAndCrlf) {
  Q t = term("\xEF\xBB\xBF# leading comment\r\ndtop({2}.*, # inline\r\n {3}.*)\r\n");
  EXPECT_EQ(t.kind(), TermKind::DTop);
}

TEST(ParseTerm, ErrorsCarryCodeAndPosition) {
  try {
    term("dtop({2}.*, )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "unexpected-token");
    EXPECT_EQ(e.span().column, 13u);
    EXPECT_FALSE(e.expected().empty());
    EXPECT_EQ(std::string(e.what()).rfind("1:13: ", 0), 0u);
  }
  try {
    term("{1/0}.*");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "malformed-scalar");
  }
  try {
    term("  # nothing\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "empty-input");
  }
  EXPECT_THROW(term("{1}.* {2}.* )"), ParseError);
  EXPECT_THROW(term("dtop"), ParseError);
  EXPECT_THROW(term("\\dtop:unit. {1}.*"), ParseError);
}

TEST(ParseTerm, TensorCanBeDisabled) {
  lsodot::ParseOptions strict;
  strict.allowTensor = false;
  EXPECT_THROW(lsodot::parseTerm<Rational>("[{1}.*, {0}.*] >< {1}.*", strict), ParseError);
}

TEST(ParseTerm, GaussianScalars) {
  G t = gterm("{1+-2i}.*");
  EXPECT_EQ(t.scalar(), GaussianRational(q(1), q(-2)));
  EXPECT_THROW(term("{2i}.*"), ParseError);  // not a rational
}

TEST(PrintTerm, Forms) {
  EXPECT_EQ(printTerm(star(1, 2)), "{1/2}.*");
  EXPECT_EQ(printTerm(Q::sum(star(1), star(2))), "{1}.* + {2}.*");
  EXPECT_EQ(printTerm(term("\\x:unit. x")), "\\x:unit. x");
  EXPECT_EQ(printTerm(term("(f x) y")), "f x y");
  EXPECT_EQ(printTerm(term("f (x y)")), "f (x y)");
  EXPECT_EQ(printTerm(term("({1}.* + {2}.*) + {3}.*")), "{1}.* + {2}.* + {3}.*");
  EXPECT_EQ(printTerm(term("{1}.* + ({2}.* + {3}.*)")), "{1}.* + ({2}.* + {3}.*)");
  EXPECT_EQ(printTerm(term("inl[unit](<{1}.*, {2}.*>)")), "inl[unit](<{1}.*, {2}.*>)");
}

TEST(PrintTerm, RoundTripsGeneratedTerms) {
  lsodot::GenConfig cfg;
  cfg.rules.dsup = 0.5;
  cfg.rules.tensor = 0.5;
  for (std::uint64_t i = 0; i < 300; ++i) {
    lsodot::Rng rng(lsodot::Rng::derive(11, i));
    auto g = lsodot::generateTyped<GaussianRational>(cfg, rng);
    std::string text = printTerm(g.term);
    G back = gterm(text);
    EXPECT_TRUE(lsodot::alphaEq(back, g.term)) << text;
    EXPECT_EQ(printTerm(back), text);
  }
}

TEST(ParseMatrix, RowsAndErrors) {
  auto id = lsodot::parseMatrix<Rational>("1 0\n0 1\n");
  EXPECT_EQ(id.rows(), 2);
  EXPECT_EQ(id(0, 0), q(1));
  EXPECT_EQ(id(0, 1), q(0));
  auto h = lsodot::parseMatrix<Rational>("1 1\n1 -1");
  EXPECT_EQ(h(1, 1), q(-1));
  try {
    lsodot::parseMatrix<Rational>("1/2 3\n4 5 6\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "ragged-rows");
    EXPECT_EQ(e.span().line, 2u);
  }
  EXPECT_THROW(lsodot::parseMatrix<Rational>("1 x\n"), ParseError);
  EXPECT_THROW(lsodot::parseMatrix<Rational>("\n\n"), ParseError);
}

TEST(ParseVector, OnePerLine) {
  auto v = lsodot::parseVector<GaussianRational>("1\n-1/2\n3+4i\n");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v(2), GaussianRational(q(3), q(4)));
  EXPECT_EQ(lsodot::printVector(v), "1\n-1/2\n3+4i\n");
}
