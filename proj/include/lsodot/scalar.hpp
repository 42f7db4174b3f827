#pragma once

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lsodot {

/// Exact rational number with arbitrary-precision numerator and denominator.
/// Always stored in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}           // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}          // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(static_cast<long>(v)) {}  // NOLINT
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses `int` or `int/posint`. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  static Rational zero() { return Rational(); }
  static Rational one() { return Rational(1); }

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool isZero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  Rational inverse() const;
  Rational conj() const { return *this; }
  Rational normSq() const { return *this * *this; }
  double toDouble() const { return q_.get_d(); }

  std::string toString() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

 private:
  mpq_class q_;
};

/// Gaussian rational re + im·i with both parts exact rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int v) : re_(v) {}        // NOLINT(google-explicit-constructor)
  GaussianRational(long v) : re_(v) {}       // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  /// Parses `r`, `r+ri`, `r-ri` or `ri` where r is a rational literal.
  static GaussianRational parse(std::string_view text);

  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {Rational(1)}; }
  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool isZero() const { return re_.isZero() && im_.isZero(); }
  GaussianRational conj() const { return {re_, -im_}; }
  Rational normSq() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  std::string toString() const;

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

 private:
  Rational re_;
  Rational im_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);
std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

/// Exact field of scalars. normSq lands in the rationals for every instance.
template <class S>
concept ScalarField = std::regular<S> && requires(const S a, const S b, std::string_view text) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { a.inverse() } -> std::convertible_to<S>;
  { a.conj() } -> std::convertible_to<S>;
  { a.normSq() } -> std::same_as<Rational>;
  { a.isZero() } -> std::same_as<bool>;
  { a.toString() } -> std::convertible_to<std::string>;
  { S::parse(text) } -> std::same_as<S>;
  { S::zero() } -> std::same_as<S>;
  { S::one() } -> std::same_as<S>;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr std::string_view name = "rational";
  static constexpr bool kComplex = false;
  static std::optional<Rational> fromParts(const Rational& re, const Rational& im) {
    if (!im.isZero()) return std::nullopt;
    return re;
  }
};

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr std::string_view name = "gaussian";
  static constexpr bool kComplex = true;
  static std::optional<GaussianRational> fromParts(const Rational& re, const Rational& im) {
    return GaussianRational(re, im);
  }
};

static_assert(ScalarField<Rational>);
static_assert(ScalarField<GaussianRational>);

}  // namespace lsodot
