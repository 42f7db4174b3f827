#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lsodot/metatheory.hpp"
#include "lsodot/quantum.hpp"
#include "lsodot/rewrite.hpp"

using namespace testing_helpers;
using lsodot::alphaEq;
using lsodot::Path;
using lsodot::RuleId;

namespace {

struct RuleCase {
  const char* before;
  RuleId rule;
  const char* after;
};

}  // namespace

TEST(ContractRoot, EveryDeterministicRule) {
  const RuleCase cases[] = {
      {"dtop({2}.*, {3}.*)", RuleId::BetaTop, "{2}*{3}.*"},
      {"(\\x:unit. dtop(x, v)) {2}.*", RuleId::BetaArrow, "dtop({2}.*, v)"},
      {"dand1(<a, b>, x. f x)", RuleId::BetaAnd1, "f a"},
      {"dand2(<a, b>, x. f x)", RuleId::BetaAnd2, "f b"},
      {"dor(inl[unit](a), x. f x, y. g y)", RuleId::BetaOr1, "f a"},
      {"dor(inr[unit](b), x. f x, y. g y)", RuleId::BetaOr2, "g b"},
      {"{2}.* + {3}.*", RuleId::SumStar, "{5}.*"},
      {"(\\x:unit. f x) + (\\x:unit. g x)", RuleId::SumLam, "\\x:unit. f x + g x"},
      {"<a, b> + <c, d>", RuleId::SumPair, "<a + c, b + d>"},
      {"dor(s + t, x. f x, y. g y)", RuleId::OrCommSum, "dor(s, x. f x, y. g y) + dor(t, x. f x, y. g y)"},
      {"{2}*{3}.*", RuleId::ProdStar, "{6}.*"},
      {"{2}*(\\x:unit. f x)", RuleId::ProdLam, "\\x:unit. {2}*(f x)"},
      {"{2}*<a, b>", RuleId::ProdPair, "<{2}*a, {2}*b>"},
      {"dor({2}*t, x. f x, y. g y)", RuleId::OrCommProd, "{2}*dor(t, x. f x, y. g y)"},
      {"dsup1([a, b], x. f x)", RuleId::BetaSup1, "f a"},
      {"dsup2([a, b], x. f x)", RuleId::BetaSup2, "f b"},
      {"[a, b] + [c, d]", RuleId::SumSup, "[a + c, b + d]"},
      {"{2}*[a, b]", RuleId::ProdSup, "[{2}*a, {2}*b]"},
      {"[a, b] >< s", RuleId::TensorSup, "[a >< s, b >< s]"},
      {"{3}.* >< s", RuleId::TensorStar, "{3}*s"},
  };
  for (const auto& c : cases) {
    auto s = lsodot::contractRoot(term(c.before));
    ASSERT_TRUE(s.has_value()) << c.before;
    EXPECT_EQ(s->rule, c.rule) << c.before;
    EXPECT_TRUE(alphaEq(s->after, term(c.after))) << c.before << " gave " << printTerm(s->after);
  }
}

TEST(ContractRoot, SumLamRenamesApartWhenBindersDiffer) {
  auto s = lsodot::contractRoot(term("(\\x:unit. dtop(x, y)) + (\\y:unit. dtop(y, x))"));
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(alphaEq(s->after, term("\\z:unit. dtop(z, y) + dtop(z, x)"))) << printTerm(s->after);
  // different annotations: not a redex
  EXPECT_FALSE(lsodot::contractRoot(term("(\\x:unit. x) + (\\x:void. x)")).has_value());
}

TEST(ContractRoot, MeasurementIsNeverFiredDeterministically) {
  EXPECT_FALSE(lsodot::contractRoot(term("dsup([{1}.*, {0}.*], x. x, y. y)")).has_value());
  EXPECT_FALSE(lsodot::contractRoot(term("x + y")).has_value());
}

TEST(Step, AtPathsAndInvalidPaths) {
  EXPECT_EQ(*lsodot::stepAt(term("dtop({2}.*, {3}.*)"), Path{}), term("{2}*{3}.*"));
  EXPECT_EQ(*lsodot::stepAt(term("{1}.* + {2}.*"), Path{}), star(3));
  EXPECT_TRUE(alphaEq(*lsodot::stepAt(term("{5}*[a, b]"), Path{}), term("[{5}*a, {5}*b]")));
  Q t = term("<{1}.* + {2}.*, dtop({2}.*, {3}.*)>");
  EXPECT_EQ(lsodot::redexPaths(t), (std::vector<Path>{{0}, {1}}));
  EXPECT_EQ(*lsodot::stepAt(t, Path{1}), term("<{1}.* + {2}.*, {2}*{3}.*>"));
  EXPECT_FALSE(lsodot::stepAt(t, Path{}).has_value());
  EXPECT_THROW(lsodot::stepAt(t, Path{2}), lsodot::InvalidPath);
}

TEST(Normalize, SmallExamples) {
  EXPECT_EQ(lsodot::normalize(term("dtop({2}.*, {3}.*)")), star(6));
  Q t = term("(\\x:unit. \\y:unit -> unit. y x) ({1}.* + {2}.*)");
  EXPECT_TRUE(alphaEq(lsodot::normalize(t), term("\\y:unit -> unit. y {3}.*")));
}

TEST(Normalize, TwoByTwoExampleMatchesHandComputation) {
  // [[a, c], [b, d]] (e, f) = (ae + cf, be + df)
  Rational a = q(2), b = q(-3), c = q(1, 2), d = q(5), e = q(7), f = q(-1, 3);
  Q mat = Q::lam("x", prop("unit & unit"),
                 Q::sum(Q::dand1(Q::var("x"), "y", Q::dtop(Q::var("y"), Q::pair(Q::star(a), Q::star(b)))),
                        Q::dand2(Q::var("x"), "z", Q::dtop(Q::var("z"), Q::pair(Q::star(c), Q::star(d))))));
  Q nf = lsodot::normalize(Q::app(mat, Q::pair(Q::star(e), Q::star(f))));
  EXPECT_EQ(nf, Q::pair(Q::star(a * e + c * f), Q::star(b * e + d * f)));
}

TEST(Normalize, BudgetAndNondeterminism) {
  lsodot::RewriteOptions tight;
  tight.budget = 2;
  EXPECT_THROW(lsodot::normalize(term("dtop({1}.*, dtop({2}.*, dtop({3}.*, {4}.*)))"), tight),
               lsodot::StepBudgetExceeded);
  Q m = Q::app(lsodot::measureOp<Rational>(1), term("[{1}.*, {1}.*]"));
  EXPECT_THROW(lsodot::normalize(m), lsodot::StuckOnNondeterminism);
  // open components are not ready: nothing to choose
  EXPECT_TRUE(lsodot::isNormal(term("dsup([v, {1}.*], x. x, y. y)")));
}

TEST(Normalize, UntracedRunTakesTheTracedSteps) {
  lsodot::GenConfig cfg;
  cfg.rules.tensor = 0.5;
  lsodot::Rng rng(23);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    std::optional<Q> g;
    try {
      g = lsodot::generateTyped<Rational>(cfg, rng).term;
    } catch (const lsodot::GenerationExhausted&) {
      continue;
    }
    const Q& t = *g;
    auto [nf, trace] = lsodot::normalizeTraced(t);
    EXPECT_EQ(lsodot::normalize(t), nf) << printTerm(t);
    std::size_t n = trace.steps.size();
    lsodot::RewriteOptions exact;
    exact.budget = n;
    EXPECT_NO_THROW(lsodot::normalize(t, exact));
    if (n > 0) {
      lsodot::RewriteOptions under;
      under.budget = n - 1;
      EXPECT_THROW(lsodot::normalize(t, under), lsodot::StepBudgetExceeded);
    }
    ++compared;
  }
  EXPECT_GT(compared, 250);
}

TEST(Normalize, RandomOrdersAgree) {
  Q t = term(
      "(\\f:unit -> unit & unit. dand1(f {2}.*, a. a) + dand2(f {3}.*, b. b)) "
      "(\\x:unit. dtop(x, <{1}.* + {1}.*, {2}*{4}.*>))");
  Q nf = lsodot::normalize(t);
  lsodot::Rng rng(5);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(alphaEq(lsodot::normalizeRandomOrder(t, rng), nf));
}

TEST(SampleNormalize, ZeroWeightBranchIsNeverTaken) {
  Q t = term("dsup([{1}.*, {0}.*], x. x, y. y)");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    lsodot::Rng rng(seed);
    auto [nf, trace] = lsodot::sampleNormalize<Rational>(t, rng, lsodot::NormWeigher<Rational>{});
    EXPECT_EQ(nf, star(1));
    ASSERT_EQ(trace.steps.size(), 1u);
    EXPECT_EQ(trace.steps[0].rule, RuleId::BetaSupL);
    EXPECT_EQ(trace.steps[0].probability, q(1));
  }
}

TEST(SampleNormalize, EqualSuperpositionRecordsHalf) {
  Q t = Q::app(lsodot::measureOp<Rational>(1), term("[{1}.*, {1}.*]"));
  int left = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    lsodot::Rng rng(seed);
    auto [nf, trace] = lsodot::sampleNormalize<Rational>(t, rng, lsodot::NormWeigher<Rational>{});
    bool l = nf == term("[{1}.*, {0}.*]");
    EXPECT_TRUE(l || nf == term("[{0}.*, {1}.*]")) << printTerm(nf);
    left += l;
    for (const auto& s : trace.steps) {
      if (s.probability) EXPECT_EQ(*s.probability, q(1, 2));
    }
    EXPECT_EQ(lsodot::replay(trace), std::nullopt);
  }
  EXPECT_GT(left, 60);
  EXPECT_LT(left, 140);
}

TEST(SampleNormalize, SameSeedSameRun) {
  Q t = Q::app(lsodot::measureOp<Rational>(2), term("[[{1}.*, {2}.*], [{3}.*, {4}.*]]"));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    lsodot::Rng r1(seed), r2(seed);
    auto a = lsodot::sampleNormalize<Rational>(t, r1, lsodot::NormWeigher<Rational>{});
    auto b = lsodot::sampleNormalize<Rational>(t, r2, lsodot::NormWeigher<Rational>{});
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second.steps.size(), b.second.steps.size());
  }
}

TEST(Replay, DetectsATamperedTrace) {
  auto [nf, trace] = lsodot::normalizeTraced(term("dtop({2}.*, {1}.* + {2}.*)"));
  EXPECT_EQ(nf, star(6));
  EXPECT_EQ(lsodot::replay(trace), std::nullopt);
  auto bad = trace;
  bad.steps.at(0).rule = RuleId::SumStar;
  EXPECT_EQ(lsodot::replay(bad), std::optional<std::size_t>{0});
  auto wrongResult = trace;
  wrongResult.steps.back().after = star(7);
  EXPECT_EQ(lsodot::replay(wrongResult), std::optional<std::size_t>{trace.steps.size() - 1});
}

TEST(Convertible, Cases) {
  EXPECT_TRUE(lsodot::convertible(term("<{1}.*, {2}.*> + <{3}.*, {4}.*>"), term("<{4}.*, {6}.*>")));
  EXPECT_FALSE(lsodot::convertible(term("\\y:unit -> unit. y {3}.*"), term("\\y:unit -> unit. y {1}.* + y {2}.*")));
  Q t = term("dand2(<{1}.*, {2}*{2}.*>, x. x)");
  EXPECT_TRUE(lsodot::convertible(t, t));
  EXPECT_TRUE(lsodot::convertible(t, star(4)));
}

TEST(RuleNames, AreStable) {
  EXPECT_EQ(lsodot::toString(RuleId::BetaTop), "BetaTop");
  EXPECT_EQ(lsodot::toString(RuleId::TensorStar), "TensorStar");
  EXPECT_EQ(lsodot::kRuleCount, 22u);
}
