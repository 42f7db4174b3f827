#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lsodot/matrices.hpp"
#include "lsodot/random.hpp"
#include "oracles.hpp"

using namespace testing_helpers;
using lsodot::VShape;
using QM = lsodot::MatrixValue<Rational>;
using QV = lsodot::VectorValue<Rational>;

namespace {

Rational smallScalar(lsodot::Rng& rng) {
  return q(static_cast<long long>(rng.below(13)) - 6, 1 + static_cast<long long>(rng.below(3)));
}

oracle::Mat<Rational> toRows(const QM& m) {
  oracle::Mat<Rational> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
  return out;
}

oracle::Vec<Rational> toVec(const QV& v) { return {v.data(), v.data() + v.size()}; }

Proposition randomTree(lsodot::Rng& rng, std::size_t leaves, bool sup) {
  if (leaves == 1) return Proposition::top();
  std::size_t l = 1 + rng.below(leaves - 1);
  Proposition a = randomTree(rng, l, sup), b = randomTree(rng, leaves - l, sup);
  return sup ? Proposition::sup(a, b) : Proposition::conj(a, b);
}

}  // namespace

TEST(CompileMatrix, TwoByTwoGolden) {
  QM m(2, 2);
  m << q(2), q(5), q(3), q(7);
  VShape a = VShape::of(prop("unit & unit"));
  Q f = lsodot::compileMatrix(m, a, a);
  Q direct = term(
      "\\x:unit & unit. dand1(x, y. dtop(y, <{2}.*, {3}.*>)) + dand2(x, z. dtop(z, <{5}.*, {7}.*>))");
  Q u = term("<{11}.*, {13}.*>");
  EXPECT_EQ(lsodot::normalize(Q::app(f, u)), term("<{87}.*, {124}.*>"));
  EXPECT_TRUE(lsodot::alphaEq(lsodot::normalize(Q::app(f, u)), lsodot::normalize(Q::app(direct, u))));
}

TEST(CompileMatrix, RejectsWrongDimensions) {
  QM m(2, 3);
  m.setZero();
  VShape a = VShape::of(prop("unit & unit"));
  EXPECT_THROW(lsodot::compileMatrix(m, a, a), lsodot::ShapeError);
}

TEST(CompileMatrix, AgreesWithBruteForceProduct) {
  lsodot::Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    std::size_t n = 1 + rng.below(8), m = 1 + rng.below(8);
    bool sup = rng.below(2);
    VShape a = VShape::of(randomTree(rng, n, sup), sup ? lsodot::Flavor::Sup : lsodot::Flavor::And);
    VShape b = VShape::of(randomTree(rng, m, sup), sup ? lsodot::Flavor::Sup : lsodot::Flavor::And);
    QM mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
      for (Eigen::Index c = 0; c < mat.cols(); ++c) mat(r, c) = smallScalar(rng);
    QV u(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = smallScalar(rng);
    Q f = lsodot::compileMatrix(mat, a, b);
    QV got = lsodot::applyLinear(f, u, a, b);
    EXPECT_EQ(toVec(got), oracle::matVec(toRows(mat), toVec(u))) << "case " << i;
  }
}

TEST(CompileMatrix, CompositionIsMatrixProduct) {
  lsodot::Rng rng(7);
  VShape a = VShape::of(prop("unit & (unit & unit)"));
  VShape b = VShape::of(prop("(unit & unit) & unit"));
  QM m1(3, 3), m2(3, 3);
  for (Eigen::Index r = 0; r < 3; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) m1(r, c) = smallScalar(rng), m2(r, c) = smallScalar(rng);
  QV u(3);
  u << q(1), q(-2), q(1, 2);
  Q f1 = lsodot::compileMatrix(m1, a, b), f2 = lsodot::compileMatrix(m2, b, a);
  QV got = lsodot::decode(Q::app(f2, Q::app(f1, lsodot::encode(u, a))), a);
  EXPECT_EQ(toVec(got), oracle::matVec(oracle::matMul(toRows(m2), toRows(m1)), toVec(u)));
}

TEST(MatrixText, Parse) {
  QM m = lsodot::parseMatrix<Rational>("2 5\n3 7\n");
  EXPECT_EQ(m(0, 1), q(5));
  EXPECT_EQ(m(1, 0), q(3));
  EXPECT_THROW(lsodot::parseMatrix<Rational>("1 2\n3\n"), lsodot::ParseError);
}
