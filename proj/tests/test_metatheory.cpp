#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lsodot/metatheory.hpp"
#include "lsodot/rewrite.hpp"
#include "lsodot/typing.hpp"

using namespace testing_helpers;
using lsodot::GenConfig;
using lsodot::mu;

TEST(Mu, ByConstructor) {
  EXPECT_EQ(mu(term("x")), 0u);
  EXPECT_EQ(mu(star(5)), 1u);
  EXPECT_EQ(mu(term("x + {1}.*")), 2u);
  EXPECT_EQ(mu(term("<x, <y, z>>")), 2u);
  EXPECT_EQ(mu(term("{2}*x")), 1u);
  EXPECT_EQ(mu(term("\\x:unit. dtop(x, y)")), 2u);
  EXPECT_EQ(mu(term("dtop(x, {1}.*)")), 2u);
  EXPECT_EQ(mu(term("dor(t, a. a, b. dtop(b, {1}.*))")), 3u);
  EXPECT_EQ(mu(term("[{1}.*, {1}.*] >< {2}.*")), 4u);
}

TEST(Mu, StrictSubstitutionWitness) {
  // substituting into an absorbing dbot does not add the argument's measure
  Q t = term("dbot[unit](y)");
  Q u = star(1);
  Q s = lsodot::substitute(t, "x", u);
  EXPECT_EQ(mu(s), 1u);
  EXPECT_LT(mu(s), mu(t) + mu(u));
  EXPECT_TRUE(lsodot::derivableIn(lsodot::Context{{"x", prop("unit")}, {"y", prop("void")}}, t));
}

TEST(ElimContext, OfFillAndDecompose) {
  auto k = lsodot::ElimContext<Rational>::of(term("dand1(dtop(_, <{1}.*, {2}.*>), x. x)"));
  EXPECT_EQ(k.depth(), 2u);
  EXPECT_EQ(k.fill(term("y")), term("dand1(dtop(y, <{1}.*, {2}.*>), x. x)"));
  EXPECT_EQ(lsodot::ElimContext<Rational>{}.fill(star(1)), star(1));
  EXPECT_THROW(lsodot::ElimContext<Rational>::of(term("<_, a>")), std::invalid_argument);
  EXPECT_THROW(lsodot::ElimContext<Rational>::of(term("dtop(y, _)")), std::invalid_argument);

  auto [ctx, head] = lsodot::decompose(term("dand2(f {1}.*, z. z)"));
  EXPECT_EQ(head, term("f"));
  EXPECT_EQ(ctx.fill(term("g")), term("dand2(g {1}.*, z. z)"));
  EXPECT_THROW(lsodot::decompose(term("dtop({1}.*, {2}.*)")), std::domain_error);
}

TEST(Generator, ProducesWellTypedTerms) {
  GenConfig cfg;
  cfg.rules.dsup = 0.5;
  cfg.rules.tensor = 0.5;
  lsodot::Rng rng(17);
  int made = 0;
  for (int i = 0; i < 200; ++i) {
    try {
      auto g = lsodot::generateTyped<Rational>(cfg, rng);
      EXPECT_EQ(lsodot::synthesize(g.context, g.term).type, g.type);
      EXPECT_TRUE(lsodot::derivableIn(g.context, g.term));
      ++made;
    } catch (const lsodot::GenerationExhausted&) {
    }
  }
  EXPECT_GT(made, 150);
}

TEST(Generator, SameSeedSameTerm) {
  GenConfig cfg;
  cfg.seed = 99;
  auto a = lsodot::generateTyped<Rational>(cfg);
  auto b = lsodot::generateTyped<Rational>(cfg);
  EXPECT_EQ(a.term, b.term);
  EXPECT_EQ(a.context, b.context);
}

TEST(Generator, ClosedProofsOfVectorShapes) {
  GenConfig cfg;
  lsodot::Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    Q t = lsodot::generateClosed<Rational>(cfg, rng, prop("unit & (unit & unit)"));
    EXPECT_NO_THROW(lsodot::checkClosed(t, prop("unit & (unit & unit)")));
  }
}

TEST(Generator, ConfigValidation) {
  GenConfig cfg;
  cfg.props.top = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_FALSE(lsodot::likelyInhabited(prop("void")));
  EXPECT_TRUE(lsodot::likelyInhabited(prop("unit & unit")));
}

TEST(Shrink, FindsASmallerFailingTerm) {
  lsodot::Context ctx;
  Q big = term("<dtop({2}.*, {3}.* + {4}.*), dand1(<{1}.*, {5}.*>, x. {7}*x)>");
  // "fails" whenever the term mentions the scalar 7
  auto has7 = [](const Q& t) { return printTerm(t).find("{7}") != std::string::npos; };
  Q small = lsodot::shrink(ctx, big, std::function<bool(const Q&)>(has7));
  EXPECT_TRUE(has7(small));
  EXPECT_LT(printTerm(small).size(), printTerm(big).size());
  EXPECT_NO_THROW(lsodot::synthesize(ctx, small));
}

class SuiteTest : public ::testing::TestWithParam<std::string> {};

TEST_P(SuiteTest, PassesSmallRun) {
  lsodot::SuiteOptions opts;
  opts.n = 60;
  opts.seed = 3;
  opts.threads = 2;
  auto r = lsodot::runSuite<Rational>(GetParam(), opts);
  EXPECT_EQ(r.cases.size(), 60u);
  for (const auto& c : r.cases) EXPECT_TRUE(c.passed) << c.index << ": " << c.detail << "\n" << c.term;
}

INSTANTIATE_TEST_SUITE_P(All, SuiteTest, ::testing::ValuesIn(lsodot::suiteNames()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& ch : s) if (ch == '-') ch = '_';
                           return s;
                         });

TEST(Suites, GaussianFieldAndThreadIndependence) {
  lsodot::SuiteOptions opts;
  opts.n = 30;
  auto one = lsodot::runSuite<GaussianRational>("confluence", opts);
  opts.threads = 3;
  auto three = lsodot::runSuite<GaussianRational>("confluence", opts);
  EXPECT_TRUE(one.ok());
  ASSERT_EQ(one.cases.size(), three.cases.size());
  for (std::size_t i = 0; i < one.cases.size(); ++i) EXPECT_EQ(one.cases[i].term, three.cases[i].term);
  EXPECT_THROW(lsodot::runSuite<Rational>("nope", opts), std::invalid_argument);
}
