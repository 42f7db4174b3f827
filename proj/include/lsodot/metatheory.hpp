#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsodot/random.hpp"
#include "lsodot/term.hpp"
#include "lsodot/typing.hpp"
#include "lsodot/vectors.hpp"

namespace lsodot {

/// Size function μ: additive positions (sums, pairs, case branches) count
/// their larger side, multiplicative positions count both. The ⊙
/// constructs mirror ∧/∨ and μ(t ⊗ u) = 1 + μ(t) + μ(u).
template <ScalarField S>
std::size_t mu(const Term<S>& t);

/// The name of the hole of an elimination context.
inline constexpr std::string_view kHole = "_";

template <ScalarField S>
class ElimContext;

namespace detail {
template <ScalarField S>
struct MetaImpl;
}  // namespace detail

/// One-holed stack of eliminations:
/// K ::= _ | δ⊤(K,u) | δ⊥(K) | K t | δ∧ⁱ(K,x.r) | δ∨(K,x.r,y.s) and the
/// ⊙ analogues, with u, t closed, FV(r) ⊆ {x} and FV(s) ⊆ {y}.
template <ScalarField S>
class ElimContext {
 public:
  /// The empty context _.
  ElimContext() : term_(Term<S>::var(std::string(kHole))) {}
  /// Validates k against the grammar; throws std::invalid_argument.
  static ElimContext of(const Term<S>& k);

  const Term<S>& term() const { return term_; }
  /// Number of elimination layers.
  std::size_t depth() const { return depth_; }
  /// K{t}: t plugged into the hole.
  Term<S> fill(const Term<S>& t) const;

 private:
  friend struct detail::MetaImpl<S>;
  explicit ElimContext(Term<S> k, std::size_t depth) : term_(std::move(k)), depth_(depth) {}
  Term<S> term_;
  std::size_t depth_ = 0;
};

template <ScalarField S>
Term<S> fillContext(const ElimContext<S>& k, const Term<S>& t) {
  return k.fill(t);
}

/// Splits an irreducible t with one free variable into K{u} where u is the
/// variable, an introduction, a sum or a product. Throws std::domain_error
/// when t is outside that scope.
template <ScalarField S>
std::pair<ElimContext<S>, Term<S>> decompose(const Term<S>& t);

struct PropWeights {
  double top = 4, bot = 0.5, imp = 1.5, conj = 1.5, disj = 1, sup = 1;
};

struct RuleWeights {
  double sum = 1, prod = 1, cut = 1, dsup = 0, tensor = 0;
};

struct GenConfig {
  int maxDepth = 4;
  int maxPropDepth = 2;
  std::vector<Rational> scalars = {Rational(-2), Rational(-1), Rational(0), Rational(1),
                                   Rational(2),  Rational(3),  Rational(1, 2)};
  PropWeights props;
  RuleWeights rules;
  std::uint64_t seed = 1;
  int retries = 200;
  /// Upper bound on generated nodes per attempt.
  std::size_t fuel = 3000;

  /// Throws std::invalid_argument for depth < 1 or bad weights.
  void validate() const;
};

class GenerationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <ScalarField S>
struct Generated {
  Context context;
  Term<S> term;
  Proposition type;
};

/// Random proposition from the connective weights.
Proposition generateProp(const GenConfig& cfg, Rng& rng, int depth);

/// Sufficient (not necessary) test that A has a closed proof, used to steer
/// generation away from empty targets.
bool likelyInhabited(const Proposition& a);

namespace detail {

template <ScalarField S>
struct MetaImpl {
  static std::size_t mu(const Term<S>& t);
  static ElimContext<S> validate(const Term<S>& k);
  static std::pair<ElimContext<S>, Term<S>> decompose(const Term<S>& t);
  static Term<S> generateIn(const GenConfig& cfg, Rng& rng, const Context& ctx, const Proposition& a);
  static Generated<S> generateTyped(const GenConfig& cfg, Rng& rng);
  static ElimContext<S> generateElimContext(const GenConfig& cfg, Rng& rng, const Proposition& hole,
                                            Proposition* result);
};

extern template struct MetaImpl<Rational>;
extern template struct MetaImpl<GaussianRational>;

}  // namespace detail

template <ScalarField S>
std::size_t mu(const Term<S>& t) {
  return detail::MetaImpl<S>::mu(t);
}

template <ScalarField S>
ElimContext<S> ElimContext<S>::of(const Term<S>& k) {
  return detail::MetaImpl<S>::validate(k);
}

template <ScalarField S>
Term<S> ElimContext<S>::fill(const Term<S>& t) const {
  Path p(depth_, 0);
  return term_.replacedAt(p, t);
}

template <ScalarField S>
std::pair<ElimContext<S>, Term<S>> decompose(const Term<S>& t) {
  return detail::MetaImpl<S>::decompose(t);
}

/// Derivation-directed generation of a term with ctx ⊢ t : a using every
/// variable of ctx. Throws GenerationExhausted after cfg.retries attempts.
template <ScalarField S>
Term<S> generateInContext(const GenConfig& cfg, Rng& rng, const Context& ctx, const Proposition& a) {
  return detail::MetaImpl<S>::generateIn(cfg, rng, ctx, a);
}

template <ScalarField S>
Term<S> generateClosed(const GenConfig& cfg, Rng& rng, const Proposition& a) {
  return detail::MetaImpl<S>::generateIn(cfg, rng, Context{}, a);
}

/// Random context (usually empty), target and term.
template <ScalarField S>
Generated<S> generateTyped(const GenConfig& cfg, Rng& rng) {
  return detail::MetaImpl<S>::generateTyped(cfg, rng);
}

template <ScalarField S>
Generated<S> generateTyped(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return generateTyped<S>(cfg, rng);
}

/// Random K with _:hole ⊢ K : result.
template <ScalarField S>
ElimContext<S> generateElimContext(const GenConfig& cfg, Rng& rng, const Proposition& hole, Proposition* result) {
  return detail::MetaImpl<S>::generateElimContext(cfg, rng, hole, result);
}

/// Greedy shrinking: repeatedly replaces a subterm by a smaller candidate
/// (a same-typed child, a contractum, or 1.⋆ for closed proofs of ⊤) as long
/// as ctx ⊢ t : A still holds and `fails` still reports a failure.
template <ScalarField S>
Term<S> shrink(const Context& ctx, const Term<S>& t, const std::function<bool(const Term<S>&)>& fails,
               std::size_t maxRounds = 200);

/// Checks the eight vector-space clauses (associativity, commutativity,
/// zero, inverse, scalar associativity, unit, both distributivities) as
/// convertibility on closed proofs of a. Returns the first clause that fails.
template <ScalarField S>
std::optional<std::string> vectorSpaceViolation(const VShape& a, const Term<S>& t1, const Term<S>& t2,
                                                const Term<S>& t3, const S& x, const S& y,
                                                const RewriteOptions& opts = {});

// ---------------------------------------------------------------- suites --

struct CaseResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool passed = true;
  std::string detail;
  /// Printed (shrunk) counterexample, empty when passed.
  std::string term;
};

struct SuiteReport {
  std::string name;
  std::vector<CaseResult> cases;
  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
};

/// subject-reduction, confluence, termination, mu-subst, mu-red, vecspace,
/// linearity, introduction.
const std::vector<std::string>& suiteNames();

struct SuiteOptions {
  std::size_t n = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Random reduction orders compared per case in the confluence suite.
  int orders = 5;
  /// Random (u, v, a) triples per function in the linearity suite.
  int triples = 5;
  std::optional<GenConfig> config;
};

/// Runs n seeded cases of a suite over the scalar field S. Case i uses the
/// seed Rng::derive(seed, i); results are ordered by case index.
template <ScalarField S>
SuiteReport runSuite(std::string_view name, const SuiteOptions& opts);

extern template std::optional<std::string> vectorSpaceViolation<Rational>(
    const VShape&, const Term<Rational>&, const Term<Rational>&, const Term<Rational>&, const Rational&,
    const Rational&, const RewriteOptions&);
extern template std::optional<std::string> vectorSpaceViolation<GaussianRational>(
    const VShape&, const Term<GaussianRational>&, const Term<GaussianRational>&, const Term<GaussianRational>&,
    const GaussianRational&, const GaussianRational&, const RewriteOptions&);
extern template SuiteReport runSuite<Rational>(std::string_view, const SuiteOptions&);
extern template SuiteReport runSuite<GaussianRational>(std::string_view, const SuiteOptions&);
extern template Term<Rational> shrink<Rational>(const Context&, const Term<Rational>&,
                                                const std::function<bool(const Term<Rational>&)>&, std::size_t);
extern template Term<GaussianRational> shrink<GaussianRational>(
    const Context&, const Term<GaussianRational>&, const std::function<bool(const Term<GaussianRational>&)>&,
    std::size_t);

}  // namespace lsodot
