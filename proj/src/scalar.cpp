#include "lsodot/scalar.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace lsodot {

namespace {

bool isIntLiteral(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!isIntLiteral(num)) throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rational(mpz_class(std::string(num)), mpz_class(1));
  std::string_view den = text.substr(slash + 1);
  if (!isIntLiteral(den) || den.front() == '-') {
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  }
  mpz_class d(std::string{den});
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(mpz_class(std::string(num)), d);
}

Rational Rational::inverse() const {
  if (isZero()) throw std::domain_error("inverse of zero");
  return Rational(mpq_class(1 / q_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.isZero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

std::string Rational::toString() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

GaussianRational GaussianRational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty scalar literal");
  if (text.back() != 'i') return GaussianRational(Rational::parse(text));
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last '+' or '-' that is not the leading sign of the real part.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] == '+' || (body[k] == '-' && body[k - 1] != '+')) {
      split = k;
      break;
    }
  }
  // a bare i carries an implicit coefficient of 1
  auto coefficient = [](std::string_view c) {
    if (c.empty() || c == "+") return Rational(1);
    if (c == "-") return Rational(-1);
    return Rational::parse(c);
  };
  if (split == std::string_view::npos) return GaussianRational(Rational(0), coefficient(body));
  Rational re = Rational::parse(body.substr(0, split));
  Rational im = coefficient(body.substr(split + 1));
  if (body[split] == '-') im = -im;
  return GaussianRational(std::move(re), std::move(im));
}

GaussianRational GaussianRational::inverse() const {
  Rational n = normSq();
  if (n.isZero()) throw std::domain_error("inverse of zero");
  return {re_ / n, -im_ / n};
}

std::string GaussianRational::toString() const {
  if (im_.isZero()) return re_.toString();
  if (re_.isZero()) return im_.toString() + "i";
  return re_.toString() + "+" + im_.toString() + "i";
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.toString(); }
std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.toString(); }

}  // namespace lsodot
