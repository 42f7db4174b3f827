#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lsodot/term.hpp"

namespace lsodot {

namespace detail {

template <ScalarField S>
struct KernelImpl {
  using T = Term<S>;
  static T substitute(const T& t, const std::string& x, const T& u);
  static bool alphaEq(const T& a, const T& b);
  static std::string canonicalKey(const T& t);
};

extern template struct KernelImpl<Rational>;
extern template struct KernelImpl<GaussianRational>;

}  // namespace detail

/// `base` itself if it is not in `avoid`, otherwise base with primes appended.
std::string freshName(const std::string& base, const std::set<std::string, std::less<>>& avoid);

template <ScalarField S>
std::set<std::string> freeVars(const Term<S>& t) {
  return {t.freeVars().begin(), t.freeVars().end()};
}

/// Capture-avoiding (u/x)t. Bound variables that would capture a free
/// variable of u are renamed by appending primes.
template <ScalarField S>
Term<S> substitute(const Term<S>& t, const std::string& x, const Term<S>& u) {
  return detail::KernelImpl<S>::substitute(t, x, u);
}

template <ScalarField S>
bool alphaEq(const Term<S>& a, const Term<S>& b) {
  return detail::KernelImpl<S>::alphaEq(a, b);
}

/// Nameless rendering: bound variables become de Bruijn indices, free ones
/// keep their names. Equal keys iff α-equivalent; suitable for hashing.
template <ScalarField S>
std::string canonicalKey(const Term<S>& t) {
  return detail::KernelImpl<S>::canonicalKey(t);
}

template <ScalarField S>
struct AlphaHash {
  std::size_t operator()(const Term<S>& t) const { return std::hash<std::string>{}(canonicalKey(t)); }
};

template <ScalarField S>
struct AlphaEqual {
  bool operator()(const Term<S>& a, const Term<S>& b) const { return alphaEq(a, b); }
};

}  // namespace lsodot
