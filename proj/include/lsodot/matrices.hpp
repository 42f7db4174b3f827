#pragma once

#include <string>

#include "lsodot/typing.hpp"
#include "lsodot/vectors.hpp"

namespace lsodot {

namespace detail {

template <ScalarField S>
Term<S> compileColumns(const MatrixValue<S>& m, Eigen::Index firstCol, const VShape& a, const VShape& b) {
  using T = Term<S>;
  if (a.isTop()) {
    VectorValue<S> col = m.col(firstCol);
    return T::lam("x", a.prop(), T::dtop(T::var("x"), encode(col, b)));
  }
  VShape a1 = a.left();
  VShape a2 = a.right();
  T t1 = compileColumns(m, firstCol, a1, b);
  T t2 = compileColumns(m, firstCol + static_cast<Eigen::Index>(a1.dim()), a2, b);
  bool sup = a.flavor() == Flavor::Sup;
  T left = sup ? T::dsup1(T::var("x"), "y", T::app(t1, T::var("y")))
               : T::dand1(T::var("x"), "y", T::app(t1, T::var("y")));
  T right = sup ? T::dsup2(T::var("x"), "z", T::app(t2, T::var("z")))
                : T::dand2(T::var("x"), "z", T::app(t2, T::var("z")));
  return T::lam("x", a.prop(), T::sum(std::move(left), std::move(right)));
}

}  // namespace detail

/// Proof of A ⇒ B representing M (rows = d(B), columns = d(A)), built by
/// recursion on A: λx.δ⊤(x, column) at a leaf, and
/// λx.(δ¹(x, y.(t₁ y)) ⊞ δ²(x, z.(t₂ z))) on a pair, splitting M's columns.
/// The result is type-checked before it is returned.
template <ScalarField S>
Term<S> compileMatrix(const MatrixValue<S>& m, const VShape& a, const VShape& b) {
  if (static_cast<std::size_t>(m.cols()) != a.dim() || static_cast<std::size_t>(m.rows()) != b.dim()) {
    throw ShapeError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " but " +
                     toString(a.prop()) + " -> " + toString(b.prop()) + " needs " + std::to_string(b.dim()) + "x" +
                     std::to_string(a.dim()));
  }
  Term<S> t = detail::compileColumns(m, 0, a, b);
  checkClosed(t, Proposition::imp(a.prop(), b.prop()));
  return t;
}

/// F(u) = decode(f ū^A) for a closed proof f of A ⇒ B.
template <ScalarField S>
VectorValue<S> applyLinear(const Term<S>& f, const VectorValue<S>& u, const VShape& a, const VShape& b,
                           const RewriteOptions& opts = {}) {
  return decode(Term<S>::app(f, encode(u, a)), b, opts);
}

}  // namespace lsodot
