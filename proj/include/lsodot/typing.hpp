#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lsodot/proposition.hpp"
#include "lsodot/term.hpp"

namespace lsodot {

enum class TypeErrorKind {
  UnboundVar,
  ReusedVar,
  UnusedVar,
  ContextMismatch,
  ConnectiveMismatch,
  StarInNonemptyContext,
  AnnotationMismatch,
};

/// "unbound-var", "reused-var", ...
std::string_view toString(TypeErrorKind k);

struct Diagnostic {
  TypeErrorKind kind;
  std::optional<SourceSpan> span;
  Path path;
  std::string message;
};

/// All diagnostics found in one pass. Linearity problems are collected and
/// checking continues; unbound variables and connective or annotation
/// mismatches stop it. kind() is the diagnostic closest to the root.
class TypeError : public std::runtime_error {
 public:
  explicit TypeError(std::vector<Diagnostic> diags);

  TypeErrorKind kind() const { return diags_[primary_].kind; }
  const Diagnostic& primary() const { return diags_[primary_]; }
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  bool has(TypeErrorKind k) const;

 private:
  std::vector<Diagnostic> diags_;
  std::size_t primary_ = 0;
};

/// Minimal consumption of a judgment: `used` must be in the context, and any
/// further context variables are allowed only when `slack` (a ⊥-elimination
/// can absorb them).
struct UsageReport {
  std::set<std::string> used;
  bool slack = false;
};

struct Synthesis {
  Proposition type;
  UsageReport usage;
};

/// Explicit derivation tree. Rule names: ax, top-i, sum, prod, top-e, bot-e,
/// imp-i, imp-e, and-i, and-e1, and-e2, or-i1, or-i2, or-e, sup-i, sup-e1,
/// sup-e2, sup-e, tens. Premise terms may differ from the conclusion's
/// subterms by α-renaming of binders.
template <ScalarField S>
struct Derivation {
  std::string rule;
  Context context;
  Term<S> term;
  Proposition type;
  std::vector<Derivation> premises;
};

/// A ⊙-shaped A with every ⊤ leaf replaced by B.
Proposition tensorType(const Proposition& a, const Proposition& b);

namespace detail {

template <ScalarField S>
struct TypingImpl {
  static Synthesis synthesize(const Context& ctx, const Term<S>& t);
  static Derivation<S> derive(const Context& ctx, const Term<S>& t);
  static std::optional<std::string> verify(const Derivation<S>& d);
};

extern template struct TypingImpl<Rational>;
extern template struct TypingImpl<GaussianRational>;

}  // namespace detail

/// Type and minimal usage of t under ctx. Throws TypeError.
template <ScalarField S>
Synthesis synthesize(const Context& ctx, const Term<S>& t) {
  return detail::TypingImpl<S>::synthesize(ctx, t);
}

template <ScalarField S>
Proposition typeOf(const Term<S>& t) {
  return synthesize(Context{}, t).type;
}

/// Throws TypeError (annotation-mismatch when t is typable at another type).
template <ScalarField S>
void checkClosed(const Term<S>& t, const Proposition& expected) {
  Proposition got = typeOf(t);
  if (got != expected) {
    throw TypeError({{TypeErrorKind::AnnotationMismatch, t.span(), {},
                      "expected " + toString(expected) + ", found " + toString(got)}});
  }
}

/// True iff ctx ⊢ t : A holds for some A with exactly the variables of ctx.
template <ScalarField S>
bool derivableIn(const Context& ctx, const Term<S>& t) {
  try {
    UsageReport u = synthesize(ctx, t).usage;
    return u.slack || u.used.size() == ctx.size();
  } catch (const TypeError&) {
    return false;
  }
}

/// Derivation of ctx ⊢ t : A; requires derivableIn(ctx, t).
template <ScalarField S>
Derivation<S> derive(const Context& ctx, const Term<S>& t) {
  return detail::TypingImpl<S>::derive(ctx, t);
}

/// Checks every node of d against the declarative rules, independently of
/// the synthesis algorithm. Returns a description of the first bad node.
template <ScalarField S>
std::optional<std::string> verifyDerivation(const Derivation<S>& d) {
  return detail::TypingImpl<S>::verify(d);
}

}  // namespace lsodot
