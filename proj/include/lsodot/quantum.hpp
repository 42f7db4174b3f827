#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "lsodot/matrices.hpp"
#include "lsodot/random.hpp"
#include "lsodot/rewrite.hpp"
#include "lsodot/vectors.hpp"

namespace lsodot {

/// n if t is a proof of Q_n made only of [_, _] and a.* (hence closed and
/// irreducible).
template <ScalarField S>
std::optional<std::size_t> qubitDepth(const Term<S>& t) {
  if (t.is(TermKind::Star)) return 0;
  if (!t.is(TermKind::SupPair)) return std::nullopt;
  auto l = qubitDepth(t.child(0));
  auto r = qubitDepth(t.child(1));
  if (!l || !r || *l != *r) return std::nullopt;
  return *l + 1;
}

/// ‖t‖² for a closed irreducible proof t of Q_n.
template <ScalarField S>
Rational normSq(const Term<S>& t, std::size_t n) {
  if (n == 0) {
    if (!t.is(TermKind::Star)) throw ShapeError("expected a.* as a proof of Q_0");
    return t.scalar().normSq();
  }
  if (!t.is(TermKind::SupPair)) throw ShapeError("expected [u1, u2] as a proof of Q_" + std::to_string(n));
  return normSq(t.child(0), n - 1) + normSq(t.child(1), n - 1);
}

/// Probability hook for measurement: ‖u1‖²/(‖u1‖²+‖u2‖²) when both are
/// closed irreducible proofs of the same Q_n and not both of norm 0,
/// otherwise 1/2.
template <ScalarField S>
struct NormWeigher {
  Rational operator()(const Term<S>& u1, const Term<S>& u2) const {
    auto n1 = qubitDepth(u1);
    auto n2 = qubitDepth(u2);
    Rational half = Rational(1) / Rational(2);
    if (!n1 || !n2 || *n1 != *n2) return half;
    Rational a = normSq(u1, *n1);
    Rational b = normSq(u2, *n2);
    if ((a + b).isZero()) return half;
    return a / (a + b);
  }
};

/// 𝟎 = inl(1.⋆) and 𝟏 = inr(1.⋆), proofs of ⊤ ∨ ⊤.
template <ScalarField S>
Term<S> bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("bit must be 0 or 1");
  Term<S> one = Term<S>::star(S::one());
  return b == 0 ? Term<S>::inl(Proposition::top(), one) : Term<S>::inr(Proposition::top(), one);
}

/// test(t, u, v) = δ∨(t, x.δ⊤(x, u), y.δ⊤(y, v)) with x, y fresh for u, v.
template <ScalarField S>
Term<S> testTerm(const Term<S>& t, const Term<S>& u, const Term<S>& v) {
  std::set<std::string, std::less<>> avoid(u.freeVars().begin(), u.freeVars().end());
  avoid.insert(v.freeVars().begin(), v.freeVars().end());
  std::string x = freshName("x", avoid);
  std::string y = freshName("y", avoid);
  return Term<S>::dor(t, x, Term<S>::dtop(Term<S>::var(x), u), y, Term<S>::dtop(Term<S>::var(y), v));
}

/// π_n = λx.δ(x, y.[y, 0•y], z.[0•z, z]), measuring the first qubit of Q_n.
/// The closed 0_{Q_{n-1}} cannot sit beside y in an additive pair, so the
/// zero half is 0•y, which normalizes to 0_{Q_{n-1}} once y is replaced.
template <ScalarField S>
Term<S> measureOp(std::size_t n) {
  using T = Term<S>;
  if (n == 0) throw std::invalid_argument("measurement needs at least one qubit");
  return T::lam("x", qubitProp(n),
                T::dsup(T::var("x"), "y", T::supPair(T::var("y"), T::scal(S::zero(), T::var("y"))), "z",
                        T::supPair(T::scal(S::zero(), T::var("z")), T::var("z"))));
}

/// A with every ⊤ leaf replaced by B; dimension d(A)·d(B).
VShape tensorShape(const VShape& a, const VShape& b);

/// t ⊗ u for closed proofs of ⊙-shaped A and B.
template <ScalarField S>
Term<S> tensorProof(const Term<S>& t, const VShape& a, const Term<S>& u, const VShape& b) {
  if (a.flavor() != Flavor::Sup || b.flavor() != Flavor::Sup) throw ShapeError("tensor needs @-shaped operands");
  return Term<S>::tensor(t, u);
}

/// Outcome of one measurement run: 0 or 1 for the first measurement step
/// taken (left or right branch), or nullopt if no measurement fired.
template <ScalarField S>
std::optional<int> firstOutcome(const Trace<S>& trace) {
  for (const TraceStep<S>& s : trace.steps) {
    if (s.rule == RuleId::BetaSupL) return 0;
    if (s.rule == RuleId::BetaSupR) return 1;
  }
  return std::nullopt;
}

struct OutcomeCounts {
  std::uint64_t zero = 0;
  std::uint64_t one = 0;
  std::uint64_t none = 0;
  std::uint64_t total() const { return zero + one + none; }
};

/// Runs sampleNormalize `samples` times with the norm weigher. Sample i uses
/// the seed Rng::derive(seed, i), so counts do not depend on `threads`.
template <ScalarField S>
OutcomeCounts sampleOutcomes(const Term<S>& program, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 1, const RewriteOptions& opts = {}) {
  std::vector<std::int8_t> outcome(samples, -1);
  NormWeigher<S> weigher;
  auto work = [&](unsigned worker, unsigned stride) {
    for (std::uint64_t i = worker; i < samples; i += stride) {
      Rng rng(Rng::derive(seed, i));
      auto [nf, trace] = sampleNormalize<S>(program, rng, weigher, opts);
      auto o = firstOutcome(trace);
      outcome[i] = o ? static_cast<std::int8_t>(*o) : std::int8_t{-1};
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& th : pool) th.join();
  }
  OutcomeCounts c;
  for (std::int8_t o : outcome) {
    if (o == 0) ++c.zero;
    else if (o == 1) ++c.one;
    else ++c.none;
  }
  return c;
}

/// The four one-bit functions: constant 0, constant 1, identity, negation.
enum class DeutschOracle { Const0, Const1, Identity, Not };

std::optional<DeutschOracle> parseOracle(std::string_view name);
int oracleValue(DeutschOracle o, int x);

/// Unnormalized Hadamard [[1, 1], [1, -1]].
template <ScalarField S>
MatrixValue<S> hadamard() {
  MatrixValue<S> h(2, 2);
  h << S::one(), S::one(), S::one(), -S::one();
  return h;
}

/// U_f |x, y⟩ = |x, y ⊕ f(x)⟩ on basis index 2x + y.
template <ScalarField S>
MatrixValue<S> oracleMatrix(DeutschOracle o) {
  MatrixValue<S> u = MatrixValue<S>::Zero(4, 4);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) u(2 * x + (y ^ oracleValue(o, x)), 2 * x + y) = S::one();
  }
  return u;
}

/// π₂ ((H⊗I) (U_f ((H⊗H) (|0⟩ ⊗ |1⟩)))) with every gate compiled to a
/// proof of Q₂ ⇒ Q₂; the first qubit of the result is the answer.
template <ScalarField S>
Term<S> deutschProgram(DeutschOracle o) {
  using T = Term<S>;
  VShape q1 = VShape::qubits(1);
  VShape q2 = VShape::qubits(2);
  MatrixValue<S> h = hadamard<S>();
  MatrixValue<S> id = MatrixValue<S>::Identity(2, 2);
  MatrixValue<S> hh = Eigen::kroneckerProduct(h, h).eval();
  MatrixValue<S> hi = Eigen::kroneckerProduct(h, id).eval();
  VectorValue<S> e0(2), e1(2);
  e0 << S::one(), S::zero();
  e1 << S::zero(), S::one();
  T state = tensorProof(encode(e0, q1), q1, encode(e1, q1), q1);
  T circuit = T::app(compileMatrix(hh, q2, q2), state);
  circuit = T::app(compileMatrix(oracleMatrix<S>(o), q2, q2), circuit);
  circuit = T::app(compileMatrix(hi, q2, q2), circuit);
  return T::app(measureOp<S>(2), circuit);
}

template <ScalarField S>
OutcomeCounts deutschDemo(DeutschOracle o, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1) {
  return sampleOutcomes(deutschProgram<S>(o), samples, seed, threads);
}

}  // namespace lsodot
