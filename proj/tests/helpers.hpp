#pragma once

#include <string_view>

#include "lsodot/kernel.hpp"
#include "lsodot/proposition.hpp"
#include "lsodot/syntax.hpp"

namespace testing_helpers {

using lsodot::GaussianRational;
using lsodot::Proposition;
using lsodot::Rational;
using Q = lsodot::Term<Rational>;
using G = lsodot::Term<GaussianRational>;

inline Proposition prop(std::string_view s) { return lsodot::parseProposition(s); }
inline Q term(std::string_view s) { return lsodot::parseTerm<Rational>(s); }
inline G gterm(std::string_view s) { return lsodot::parseTerm<GaussianRational>(s); }
inline Rational q(long long n, long long d = 1) { return Rational(n) / Rational(d); }
inline Q star(long long n, long long d = 1) { return Q::star(q(n, d)); }

}  // namespace testing_helpers
