#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "lsodot/linalg.hpp"
#include "lsodot/proposition.hpp"
#include "lsodot/rewrite.hpp"
#include "lsodot/term.hpp"

namespace lsodot {

/// Wrong proposition shape, wrong dimension, or a proof that does not have
/// the expected normal-form shape.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Which pairing connective a vector proposition uses: ∧ or ⊙.
enum class Flavor { And, Sup };

/// A proposition built from ⊤ and one pairing connective.
class VShape {
 public:
  /// Validates p. A bare ⊤ takes `flavor` (default ∧); otherwise the
  /// connective decides, and an explicit conflicting flavor is an error.
  static VShape of(const Proposition& p, std::optional<Flavor> flavor = std::nullopt);
  static std::optional<VShape> tryOf(const Proposition& p, std::optional<Flavor> flavor = std::nullopt);

  static VShape top(Flavor f = Flavor::And) { return VShape(Proposition::top(), f, 1); }
  /// Q_n: Q_0 = ⊤, Q_{n+1} = Q_n ⊙ Q_n.
  static VShape qubits(std::size_t n);

  const Proposition& prop() const { return prop_; }
  Flavor flavor() const { return flavor_; }
  /// Number of ⊤ leaves.
  std::size_t dim() const { return dim_; }
  bool isTop() const { return prop_.kind() == PropKind::Top; }
  VShape left() const;
  VShape right() const;

  friend bool operator==(const VShape& a, const VShape& b) { return a.prop_ == b.prop_ && a.flavor_ == b.flavor_; }

 private:
  VShape(Proposition p, Flavor f, std::size_t d) : prop_(std::move(p)), flavor_(f), dim_(d) {}
  Proposition prop_;
  Flavor flavor_;
  std::size_t dim_;
};

Proposition qubitProp(std::size_t n);

inline std::size_t dim(const VShape& a) { return a.dim(); }

template <ScalarField S>
Term<S> pairOf(Flavor f, Term<S> a, Term<S> b) {
  return f == Flavor::And ? Term<S>::pair(std::move(a), std::move(b)) : Term<S>::supPair(std::move(a), std::move(b));
}

/// 0_A: zero at every leaf.
template <ScalarField S>
Term<S> zeroProof(const VShape& a) {
  if (a.isTop()) return Term<S>::star(S::zero());
  return pairOf<S>(a.flavor(), zeroProof<S>(a.left()), zeroProof<S>(a.right()));
}

namespace detail {

template <ScalarField S>
void readLeaves(const Term<S>& t, const VShape& a, VectorValue<S>& out, Eigen::Index& at) {
  if (a.isTop()) {
    if (!t.is(TermKind::Star)) throw ShapeError("expected a.* for unit, found a " + std::string(kindName(t.kind())));
    out(at++) = t.scalar();
    return;
  }
  TermKind want = a.flavor() == Flavor::And ? TermKind::Pair : TermKind::SupPair;
  if (!t.is(want)) {
    throw ShapeError("expected a " + std::string(kindName(want)) + " for " + toString(a.prop()) + ", found a " +
                     std::string(kindName(t.kind())));
  }
  readLeaves(t.child(0), a.left(), out, at);
  readLeaves(t.child(1), a.right(), out, at);
}

template <ScalarField S>
Term<S> encodeRange(const VectorValue<S>& u, const VShape& a, Eigen::Index from) {
  if (a.isTop()) return Term<S>::star(u(from));
  VShape l = a.left();
  return pairOf<S>(a.flavor(), encodeRange(u, l, from),
                   encodeRange(u, a.right(), from + static_cast<Eigen::Index>(l.dim())));
}

template <ScalarField S>
Term<S> mapLeaves(const Term<S>& t, const VShape& a, const auto& f) {
  if (a.isTop()) {
    if (!t.is(TermKind::Star)) throw ShapeError("expected a.* for unit");
    return Term<S>::star(f(t.scalar()));
  }
  TermKind want = a.flavor() == Flavor::And ? TermKind::Pair : TermKind::SupPair;
  if (!t.is(want)) throw ShapeError("proof does not match " + toString(a.prop()));
  return pairOf<S>(a.flavor(), mapLeaves(t.child(0), a.left(), f), mapLeaves(t.child(1), a.right(), f));
}

}  // namespace detail

/// The closed irreducible proof of A whose leaves are the entries of u.
template <ScalarField S>
Term<S> encode(const VectorValue<S>& u, const VShape& a) {
  if (static_cast<std::size_t>(u.size()) != a.dim()) {
    throw ShapeError("vector of length " + std::to_string(u.size()) + " does not fit " + toString(a.prop()) +
                     " of dimension " + std::to_string(a.dim()));
  }
  return detail::encodeRange(u, a, 0);
}

/// Normalizes t, then reads its leaves left to right.
template <ScalarField S>
VectorValue<S> decode(const Term<S>& t, const VShape& a, const RewriteOptions& opts = {}) {
  Term<S> nf = normalize(t, opts);
  VectorValue<S> out(static_cast<Eigen::Index>(a.dim()));
  Eigen::Index at = 0;
  detail::readLeaves(nf, a, out, at);
  return out;
}

/// −t: the normal form of t with every leaf negated.
template <ScalarField S>
Term<S> negProof(const VShape& a, const Term<S>& t, const RewriteOptions& opts = {}) {
  return detail::mapLeaves(normalize(t, opts), a, [](const S& x) { return -x; });
}

}  // namespace lsodot
