#pragma once

// Reference computations for the tests. Plain nested loops over
// std::vector, nothing from the library except the scalar types, so a bug
// in the term encoding cannot hide behind the same bug here.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lsodot/scalar.hpp"

namespace oracle {

using lsodot::Rational;

template <class S>
using Vec = std::vector<S>;
template <class S>
using Mat = std::vector<std::vector<S>>;  // row-major

template <class S>
Vec<S> matVec(const Mat<S>& m, const Vec<S>& v) {
  Vec<S> out(m.size(), S::zero());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != v.size()) throw std::invalid_argument("matVec: size mismatch");
    for (std::size_t c = 0; c < v.size(); ++c) out[r] = out[r] + m[r][c] * v[c];
  }
  return out;
}

template <class S>
Mat<S> matMul(const Mat<S>& a, const Mat<S>& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat<S> out(n, Vec<S>(m, S::zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) out[i][j] = out[i][j] + a[i][l] * b[l][j];
  return out;
}

// (a ⊗ b)[i·|b| + j] = a[i]·b[j]
template <class S>
Vec<S> kron(const Vec<S>& a, const Vec<S>& b) {
  Vec<S> out;
  for (const S& x : a)
    for (const S& y : b) out.push_back(x * y);
  return out;
}

template <class S>
Mat<S> kron(const Mat<S>& a, const Mat<S>& b) {
  std::size_t ar = a.size(), br = b.size();
  std::size_t ac = ar ? a[0].size() : 0, bc = br ? b[0].size() : 0;
  Mat<S> out(ar * br, Vec<S>(ac * bc, S::zero()));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

template <class S>
Rational normSq(const Vec<S>& v) {
  Rational n;
  for (const S& x : v) n = n + x.normSq();
  return n;
}

// Probability that measuring the first qubit of state v (dimension 2^n,
// big-endian) gives 1.
template <class S>
Rational probFirstQubitOne(const Vec<S>& v) {
  std::size_t half = v.size() / 2;
  Vec<S> lo(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(half));
  Vec<S> hi(v.begin() + static_cast<std::ptrdiff_t>(half), v.end());
  Rational total = normSq(v);
  if (total.isZero()) throw std::invalid_argument("zero state");
  return normSq(hi) / total;
}

// Deutsch on |0⟩|1⟩ with f given by its truth table: state-vector
// simulation with explicit gates. Returns P(first qubit = 1).
template <class S>
Rational deutschProbOne(int f0, int f1) {
  int f[2] = {f0, f1};
  Vec<S> psi = {S::zero(), S::one(), S::zero(), S::zero()};  // |01⟩, index 2x + y
  auto hadamardOn = [](const Vec<S>& v, int qubit) {
    Vec<S> out(4, S::zero());
    for (int idx = 0; idx < 4; ++idx) {
      int bit = qubit == 0 ? (idx >> 1) & 1 : idx & 1;
      int flip = qubit == 0 ? idx ^ 2 : idx ^ 1;
      // H|0⟩ = |0⟩ + |1⟩, H|1⟩ = |0⟩ − |1⟩ (unnormalized)
      out[idx] = out[idx] + (bit ? -v[idx] : v[idx]);
      out[flip] = out[flip] + v[idx];
    }
    return out;
  };
  psi = hadamardOn(hadamardOn(psi, 0), 1);
  Vec<S> uf(4, S::zero());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) uf[2 * x + (y ^ f[x])] = uf[2 * x + (y ^ f[x])] + psi[2 * x + y];
  psi = hadamardOn(uf, 0);
  return probFirstQubitOne(psi);
}

// |observed/n − p| ≤ k·sqrt(p(1−p)/n)
inline bool withinBinomialBand(std::uint64_t observed, std::uint64_t n, double p, double k = 3.0) {
  double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
  return std::abs(static_cast<double>(observed) / static_cast<double>(n) - p) <= k * sigma;
}

}  // namespace oracle
