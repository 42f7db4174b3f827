#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lsodot/matrices.hpp"
#include "lsodot/quantum.hpp"
#include "lsodot/typing.hpp"

using namespace testing_helpers;
using lsodot::Context;
using lsodot::synthesize;
using lsodot::TypeError;
using lsodot::TypeErrorKind;
using lsodot::typeOf;

namespace {

TypeError rejection(const Q& t, const Context& ctx = {}) {
  try {
    synthesize(ctx, t);
  } catch (const TypeError& e) {
    return e;
  }
  ADD_FAILURE() << printTerm(t) << " was accepted";
  throw std::logic_error("accepted");
}

std::string readExample(const std::string& name) {
  std::ifstream f(std::string(LSODOT_EXAMPLES_DIR) + "/" + name);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Synthesize, IdentityUsesNothingOutside) {
  auto s = synthesize(Context{}, term("\\x:unit. x"));
  EXPECT_EQ(s.type, prop("unit -> unit"));
  EXPECT_TRUE(s.usage.used.empty());
  EXPECT_FALSE(s.usage.slack);
}

TEST(Synthesize, ConstantFunctionIsNotLinear) {
  TypeError e = rejection(term("\\x:unit. {1}.*"));
  EXPECT_EQ(e.kind(), TypeErrorKind::UnusedVar);
  EXPECT_TRUE(e.has(TypeErrorKind::StarInNonemptyContext));
}

TEST(Synthesize, SumIsAdditive) {
  EXPECT_EQ(rejection(term("\\x:unit. x + {1}.*")).kind(), TypeErrorKind::ContextMismatch);
  EXPECT_EQ(typeOf(term("\\x:unit. x + {2}*x")), prop("unit -> unit"));
}

TEST(Synthesize, CloningTermReusesItsArgument) {
  TypeError e = rejection(term(readExample("cloning.lso")));
  EXPECT_EQ(e.kind(), TypeErrorKind::ReusedVar);
  EXPECT_NE(e.primary().message.find("'x'"), std::string::npos);
}

TEST(Synthesize, ClassicalMeasurementIsRejected) {
  TypeError e = rejection(term("\\x:unit @ unit. dsup(x, y. inl[unit]({1}.*), z. inr[unit]({1}.*))"));
  EXPECT_EQ(e.kind(), TypeErrorKind::UnusedVar);
}

TEST(Synthesize, MeasurementOperatorHasTypeQnToQn) {
  EXPECT_EQ(typeOf(lsodot::measureOp<Rational>(1)), prop("unit @ unit -> unit @ unit"));
  Proposition q3 = lsodot::qubitProp(3);
  EXPECT_EQ(typeOf(lsodot::measureOp<Rational>(3)), Proposition::imp(q3, q3));
}

TEST(Synthesize, ClosedZeroBesideABoundQubitIsRejected) {
  // a closed 0 next to y in an additive pair leaves the pair's sides unequal
  try {
    typeOf(term("\\x:unit @ unit. dsup(x, y. [y, {0}.*], z. [{0}.*, z])"));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.kind(), lsodot::TypeErrorKind::ContextMismatch);
  }
}

TEST(Synthesize, BotEliminationAbsorbsTheRest) {
  Context ctx{{"y", Proposition::bot()}, {"x", Proposition::top()}};
  auto s = synthesize(ctx, term("dbot[unit](y)"));
  EXPECT_EQ(s.type, Proposition::top());
  EXPECT_EQ(s.usage.used, std::set<std::string>{"y"});
  EXPECT_TRUE(s.usage.slack);
  EXPECT_TRUE(lsodot::derivableIn(ctx, term("dbot[unit](y)")));
}

TEST(Synthesize, MultiplicativeSplits) {
  EXPECT_EQ(rejection(term("\\x:unit. dtop(x, x)")).kind(), TypeErrorKind::ReusedVar);
  EXPECT_EQ(rejection(term("\\f:unit -> unit. f (f {1}.*)")).kind(), TypeErrorKind::ReusedVar);
  EXPECT_EQ(typeOf(term("\\x:unit. \\y:unit. dtop(x, y)")), prop("unit -> unit -> unit"));
}

TEST(Synthesize, AdditiveIntroductionsShareTheContext) {
  EXPECT_EQ(typeOf(term("\\x:unit. <x, {2}*x>")), prop("unit -> unit & unit"));
  EXPECT_EQ(typeOf(term("\\x:unit. [x, x]")), prop("unit -> unit @ unit"));
  EXPECT_EQ(rejection(term("\\x:unit. <x, {1}.*>")).kind(), TypeErrorKind::ContextMismatch);
}

TEST(Synthesize, CaseBranchesShareTheContext) {
  EXPECT_EQ(typeOf(term("\\x:unit | unit. \\y:unit. dor(x, a. dtop(a, y), b. dtop(b, y))")),
            prop("unit | unit -> unit -> unit"));
  EXPECT_EQ(rejection(term("\\x:unit | unit. \\y:unit. dor(x, a. dtop(a, y), b. b)")).kind(),
            TypeErrorKind::ContextMismatch);
}

TEST(Synthesize, StructuralErrors) {
  EXPECT_EQ(rejection(term("v")).kind(), TypeErrorKind::UnboundVar);
  EXPECT_EQ(rejection(term("{1}.* {2}.*")).kind(), TypeErrorKind::ConnectiveMismatch);
  EXPECT_EQ(rejection(term("(\\x:unit & unit. dand1(x, y. y)) {1}.*")).kind(),
            TypeErrorKind::AnnotationMismatch);
  EXPECT_EQ(rejection(term("dsup1(<{1}.*, {1}.*>, y. y)")).kind(), TypeErrorKind::ConnectiveMismatch);
}

TEST(Synthesize, EveryRejectionCarriesASpan) {
  for (const char* src : {"\\x:unit. {1}.*", "\\x:unit. x + {1}.*", "v", "{1}.* {2}.*", "\\x:unit. dtop(x, x)"}) {
    TypeError e = rejection(term(src));
    for (const auto& d : e.diagnostics()) EXPECT_TRUE(d.span.has_value()) << src;
  }
}

TEST(Synthesize, TensorType) {
  EXPECT_EQ(typeOf(term("[{1}.*, {2}.*] >< [{3}.*, {4}.*]")), prop("(unit @ unit) @ (unit @ unit)"));
  EXPECT_EQ(typeOf(term("{1}.* >< [{3}.*, {4}.*]")), prop("unit @ unit"));
  EXPECT_EQ(rejection(term("<{1}.*, {2}.*> >< {1}.*")).kind(), TypeErrorKind::ConnectiveMismatch);
  EXPECT_EQ(lsodot::tensorType(prop("unit @ (unit @ unit)"), prop("unit @ unit")),
            prop("(unit @ unit) @ ((unit @ unit) @ (unit @ unit))"));
}

TEST(CheckClosed, ExpectedType) {
  EXPECT_NO_THROW(lsodot::checkClosed(star(3), Proposition::top()));
  try {
    lsodot::checkClosed(star(3), Proposition::bot());
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.kind(), TypeErrorKind::AnnotationMismatch);
    EXPECT_EQ(e.primary().message, "expected void, found unit");
  }
  lsodot::MatrixValue<Rational> m(2, 2);
  m << q(1), q(2), q(3), q(4);
  lsodot::VShape a = lsodot::VShape::of(prop("unit & unit"));
  EXPECT_NO_THROW(lsodot::checkClosed(lsodot::compileMatrix(m, a, a), prop("unit & unit -> unit & unit")));
}

TEST(Derivation, BuiltTreesPassTheIndependentVerifier) {
  Context ctx{{"h", prop("unit & unit")}, {"v", Proposition::bot()}};
  for (const char* src : {"dand1(h, x. dtop(x, dbot[unit & unit](v)))", "dbot[unit](v)",
                          "(\\x:unit. \\y:unit. dtop(x, y)) {1}.* {2}.*"}) {
    Q t = term(src);
    Context c = lsodot::freeVars(t).empty() ? Context{} : ctx;
    auto d = lsodot::derive(c, t);
    EXPECT_EQ(lsodot::verifyDerivation(d), std::nullopt) << src;
    EXPECT_EQ(d.type, synthesize(c, t).type);
  }
}

TEST(Derivation, VerifierCatchesATamperedTree) {
  auto d = lsodot::derive(Context{}, term("\\x:unit. dtop(x, {1}.*)"));
  auto bad = d;
  bad.premises.at(0).context = Context{};  // drop x from the body's context
  EXPECT_TRUE(lsodot::verifyDerivation(bad).has_value());
  auto wrongType = d;
  wrongType.type = Proposition::top();
  EXPECT_TRUE(lsodot::verifyDerivation(wrongType).has_value());
}
