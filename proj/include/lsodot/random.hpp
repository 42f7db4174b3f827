#pragma once

#include <cstdint>
#include <random>

#include "lsodot/scalar.hpp"

namespace lsodot {

/// Seeded random source. Only raw 64-bit engine outputs are used, so draws are
/// identical across standard libraries (std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % n;
  }

  /// True with probability p (clamped to [0, 1]), decided by comparing one
  /// 64-bit draw against p·2⁶⁴ in exact arithmetic.
  bool bernoulli(const Rational& p) {
    if (p <= Rational(0)) return false;
    if (p >= Rational(1)) return true;
    std::uint64_t draw = next();
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
    mpz_class lhs = r * p.denominator();
    mpz_class rhs = p.numerator();
    rhs <<= 64;
    return lhs < rhs;
  }

  /// Seed for the index-th independent sub-stream of `seed` (splitmix64 of a
  /// mix of both), so parallel workers reproduce sequential results.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (index + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lsodot
