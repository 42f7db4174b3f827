#include <gtest/gtest.h>

#include <unordered_set>

#include "helpers.hpp"

using namespace testing_helpers;
using lsodot::alphaEq;
using lsodot::freeVars;
using lsodot::substitute;
using lsodot::TermKind;

TEST(Substitute, VariableCase) {
  EXPECT_EQ(substitute(Q::var("x"), "x", star(1)), star(1));
  EXPECT_EQ(substitute(Q::var("y"), "x", star(1)), Q::var("y"));
}

TEST(Substitute, NoCaptureNeeded) {
  Q t = term("\\y:unit. x y");
  EXPECT_EQ(substitute(t, "x", Q::var("z")), term("\\y:unit. z y"));
}

TEST(Substitute, CaptureForcesRename) {
  Q r = substitute(term("\\y:unit. x"), "x", Q::var("y"));
  ASSERT_TRUE(r.is(TermKind::Lam));
  EXPECT_EQ(r.binderOf(0), "y'");
  EXPECT_EQ(r.child(0), Q::var("y"));
}

TEST(Substitute, StopsAtShadowingBinder) {
  Q t = term("dor(v, x. x, y. dtop(y, x))");
  Q r = substitute(t, "x", star(5));
  EXPECT_EQ(r.child(1), Q::var("x"));
  EXPECT_EQ(r.child(2).child(1), star(5));
}

TEST(Substitute, BothBinderSlotsOfATwoBranchElimination) {
  Q r = substitute(term("dsup(w, a. dtop(a, b), b. dtop(b, a))"), "a", Q::var("b"));
  // first branch rebinds a (untouched); second substitutes a := b under binder b, forcing a rename
  EXPECT_EQ(r.child(1), term("dtop(a, b)"));
  EXPECT_NE(r.binderOf(2), "b");
  EXPECT_TRUE(r.child(2).hasFree("b"));
}

TEST(FreeVars, Cases) {
  EXPECT_EQ(freeVars(term("dtop(x, y)")), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(freeVars(term("\\x:unit. x")).empty());
  EXPECT_EQ(freeVars(term("dor(t, x. x, y. z)")), (std::set<std::string>{"t", "z"}));
}

TEST(AlphaEq, Cases) {
  EXPECT_TRUE(alphaEq(term("\\x:unit. x"), term("\\y:unit. y")));
  EXPECT_FALSE(alphaEq(term("\\x:unit. x"), term("\\x:unit. {1}.*")));
  EXPECT_FALSE(alphaEq(term("a + b"), term("b + a")));
  EXPECT_FALSE(alphaEq(term("\\x:unit. x"), term("\\x:void. x")));
  EXPECT_FALSE(alphaEq(term("\\x:unit. y"), term("\\y:unit. y")));
  EXPECT_TRUE(alphaEq(term("dor(t, a. a, b. b)"), term("dor(t, c. c, c. c)")));
  EXPECT_FALSE(alphaEq(star(1), star(2)));
}

TEST(AlphaEq, HashAgreesWithEquality) {
  std::unordered_set<Q, lsodot::AlphaHash<Rational>, lsodot::AlphaEqual<Rational>> set;
  set.insert(term("\\x:unit. dtop(x, {1}.*)"));
  set.insert(term("\\y:unit. dtop(y, {1}.*)"));
  set.insert(term("\\y:unit. dtop(y, {2}.*)"));
  EXPECT_EQ(set.size(), 2u);
  EXPECT_EQ(lsodot::canonicalKey(term("\\x:unit. z x")), lsodot::canonicalKey(term("\\w:unit. z w")));
}

TEST(FreshName, AvoidsTheSet) {
  std::set<std::string, std::less<>> avoid{"x", "x'"};
  EXPECT_EQ(lsodot::freshName("x", avoid), "x''");
  EXPECT_EQ(lsodot::freshName("y", avoid), "y");
}

TEST(Term, PathsAddressSubterms) {
  Q t = term("dtop({1}.*, <a, b>)");
  EXPECT_EQ(t.at({1, 0}), Q::var("a"));
  EXPECT_EQ(t.replacedAt({1, 1}, star(3)).child(1).child(1), star(3));
  EXPECT_THROW(t.at({2}), std::out_of_range);
  EXPECT_EQ(lsodot::toString(lsodot::Path{}), "e");
  EXPECT_EQ(lsodot::toString(lsodot::Path{1, 0}), "1.0");
}
