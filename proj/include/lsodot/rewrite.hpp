#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsodot/kernel.hpp"
#include "lsodot/random.hpp"
#include "lsodot/term.hpp"

namespace lsodot {

enum class RuleId {
  BetaTop,
  BetaArrow,
  BetaAnd1,
  BetaAnd2,
  BetaOr1,
  BetaOr2,
  SumStar,
  SumLam,
  SumPair,
  OrCommSum,
  ProdStar,
  ProdLam,
  ProdPair,
  OrCommProd,
  BetaSup1,
  BetaSup2,
  BetaSupL,
  BetaSupR,
  SumSup,
  ProdSup,
  TensorSup,
  TensorStar,
};

inline constexpr std::size_t kRuleCount = 22;

std::string_view toString(RuleId r);

class StepBudgetExceeded : public std::runtime_error {
 public:
  explicit StepBudgetExceeded(std::size_t budget)
      : std::runtime_error("reduction exceeded the step budget of " + std::to_string(budget) +
                           " (termination is a theorem, so this is an engine bug)"),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

/// Deterministic normalization reached a dsup whose scrutinee is a closed,
/// irreducible [u1, u2]; only sampleNormalize may choose a branch.
class StuckOnNondeterminism : public std::runtime_error {
 public:
  explicit StuckOnNondeterminism(Path where)
      : std::runtime_error("measurement redex at " + toString(where) + " needs a probabilistic step"),
        where_(std::move(where)) {}
  const Path& where() const { return where_; }

 private:
  Path where_;
};

class InvalidPath : public std::out_of_range {
 public:
  explicit InvalidPath(const Path& p) : std::out_of_range("invalid term path " + toString(p)) {}
};

template <ScalarField S>
struct Step {
  RuleId rule;
  Term<S> after;
};

template <ScalarField S>
struct TraceStep {
  RuleId rule;
  Path path;
  Term<S> after;
  /// Probability of the branch taken, for measurement steps only.
  std::optional<Rational> probability;
};

template <ScalarField S>
struct Trace {
  Term<S> start;
  std::vector<TraceStep<S>> steps;
};

/// Probability of the left branch of dsup([u1, u2], x.v, y.w).
template <ScalarField S>
using Weigher = std::function<Rational(const Term<S>&, const Term<S>&)>;

template <ScalarField S>
Rational halfWeigher(const Term<S>&, const Term<S>&) {
  return Rational(1) / Rational(2);
}

struct RewriteOptions {
  std::size_t budget = 1'000'000;
};

namespace detail {

template <ScalarField S>
struct RewriteImpl {
  using T = Term<S>;
  static std::optional<Step<S>> contractRoot(const T& t);
  static std::optional<Step<S>> step(const T& t, const Path& p);
  static std::vector<Path> redexPaths(const T& t);
  static bool isNormal(const T& t);
  static std::optional<Path> firstChoice(const T& t);
  static T normalize(const T& t, const RewriteOptions& opts, Trace<S>* trace);
  static T normalizeRandomOrder(const T& t, Rng& rng, const RewriteOptions& opts);
  static T sampleNormalize(const T& t, Rng& rng, const Weigher<S>& weigher, const RewriteOptions& opts,
                           Trace<S>* trace);
  static std::optional<std::size_t> replay(const Trace<S>& trace);
};

extern template struct RewriteImpl<Rational>;
extern template struct RewriteImpl<GaussianRational>;

}  // namespace detail

/// Applies the rule matching at the root, if any. Never fires the two
/// measurement rules.
template <ScalarField S>
std::optional<Step<S>> contractRoot(const Term<S>& t) {
  return detail::RewriteImpl<S>::contractRoot(t);
}

/// One step at a position, with the rule used. Throws InvalidPath.
template <ScalarField S>
std::optional<Step<S>> step(const Term<S>& t, const Path& p) {
  return detail::RewriteImpl<S>::step(t, p);
}

template <ScalarField S>
std::optional<Term<S>> stepAt(const Term<S>& t, const Path& p) {
  auto s = step(t, p);
  if (!s) return std::nullopt;
  return s->after;
}

/// All positions where contractRoot applies, in pre-order.
template <ScalarField S>
std::vector<Path> redexPaths(const Term<S>& t) {
  return detail::RewriteImpl<S>::redexPaths(t);
}

/// No deterministic redex and no measurement redex ready to fire.
template <ScalarField S>
bool isNormal(const Term<S>& t) {
  return detail::RewriteImpl<S>::isNormal(t);
}

/// Leftmost-outermost normal form. Throws StuckOnNondeterminism,
/// StepBudgetExceeded.
template <ScalarField S>
Term<S> normalize(const Term<S>& t, const RewriteOptions& opts = {}) {
  return detail::RewriteImpl<S>::normalize(t, opts, nullptr);
}

template <ScalarField S>
std::pair<Term<S>, Trace<S>> normalizeTraced(const Term<S>& t, const RewriteOptions& opts = {}) {
  Trace<S> trace{t, {}};
  Term<S> nf = detail::RewriteImpl<S>::normalize(t, opts, &trace);
  return {std::move(nf), std::move(trace)};
}

/// Normal form reached by contracting a uniformly chosen redex each step.
template <ScalarField S>
Term<S> normalizeRandomOrder(const Term<S>& t, Rng& rng, const RewriteOptions& opts = {}) {
  return detail::RewriteImpl<S>::normalizeRandomOrder(t, rng, opts);
}

/// Leftmost-outermost reduction where measurement redexes on closed
/// irreducible [u1, u2] take the left branch with probability weigher(u1, u2).
template <ScalarField S>
std::pair<Term<S>, Trace<S>> sampleNormalize(const Term<S>& t, Rng& rng, const Weigher<S>& weigher = halfWeigher<S>,
                                             const RewriteOptions& opts = {}) {
  Trace<S> trace{t, {}};
  Term<S> nf = detail::RewriteImpl<S>::sampleNormalize(t, rng, weigher, opts, &trace);
  return {std::move(nf), std::move(trace)};
}

/// Re-executes every step of a trace; returns the index of the first step
/// whose recorded term differs, or nullopt if the trace replays exactly.
template <ScalarField S>
std::optional<std::size_t> replay(const Trace<S>& trace) {
  return detail::RewriteImpl<S>::replay(trace);
}

/// t ≡ u, decided by comparing normal forms up to α. Terms that need a
/// measurement step are refused with StuckOnNondeterminism.
template <ScalarField S>
bool convertible(const Term<S>& t, const Term<S>& u, const RewriteOptions& opts = {}) {
  return alphaEq(normalize(t, opts), normalize(u, opts));
}

}  // namespace lsodot
