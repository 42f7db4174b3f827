#include "lsodot/typing.hpp"

#include <algorithm>

#include "lsodot/kernel.hpp"

namespace lsodot {

std::string_view toString(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVar: return "unbound-var";
    case TypeErrorKind::ReusedVar: return "reused-var";
    case TypeErrorKind::UnusedVar: return "unused-var";
    case TypeErrorKind::ContextMismatch: return "context-mismatch";
    case TypeErrorKind::ConnectiveMismatch: return "connective-mismatch";
    case TypeErrorKind::StarInNonemptyContext: return "star-in-nonempty-context";
    case TypeErrorKind::AnnotationMismatch: return "annotation-mismatch";
  }
  return "?";
}

namespace {

std::string describe(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const Diagnostic& d : diags) {
    if (!out.empty()) out += "\n";
    if (d.span) out += std::to_string(d.span->line) + ":" + std::to_string(d.span->column) + ": ";
    out += std::string(toString(d.kind)) + ": " + d.message;
  }
  return out;
}

}  // namespace

TypeError::TypeError(std::vector<Diagnostic> diags) : std::runtime_error(describe(diags)), diags_(std::move(diags)) {
  if (diags_.empty()) throw std::logic_error("TypeError without diagnostics");
  for (std::size_t i = 1; i < diags_.size(); ++i) {
    if (diags_[i].path.size() < diags_[primary_].path.size()) primary_ = i;
  }
}

bool TypeError::has(TypeErrorKind k) const {
  return std::any_of(diags_.begin(), diags_.end(), [k](const Diagnostic& d) { return d.kind == k; });
}

Proposition tensorType(const Proposition& a, const Proposition& b) {
  if (a.kind() == PropKind::Top) return b;
  if (a.kind() != PropKind::Sup) throw std::invalid_argument("tensor operand " + toString(a) + " is not ⊙-shaped");
  return Proposition::sup(tensorType(a.left(), b), tensorType(a.right(), b));
}

namespace {

using Names = std::set<std::string>;

std::string listNames(const Names& s) {
  std::string out = "{";
  for (const std::string& n : s) {
    if (out.size() > 1) out += ", ";
    out += n;
  }
  return out + "}";
}

bool subset(const Names& a, const Names& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

struct Abort {};

template <ScalarField S>
class Checker {
 public:
  using T = Term<S>;

  struct Res {
    Proposition type;
    Names used;
    bool slack = false;
  };

  explicit Checker(const Context& ctx) {
    for (const auto& [name, prop] : ctx) scope_.emplace_back(name, prop);
  }

  Res run(const T& t) {
    std::optional<Res> r;
    try {
      r = synth(t);
    } catch (const Abort&) {
    }
    if (!diags_.empty()) throw TypeError(std::move(diags_));
    return *r;
  }

 private:
  void report(TypeErrorKind k, const T& at, std::string msg) { diags_.push_back({k, at.span(), path_, std::move(msg)}); }

  [[noreturn]] void fatal(TypeErrorKind k, const T& at, std::string msg) {
    report(k, at, std::move(msg));
    throw Abort{};
  }

  Res child(const T& t, std::size_t i) {
    path_.push_back(i);
    Res r = synth(t.child(i));
    path_.pop_back();
    return r;
  }

  Res bound(const T& t, std::size_t i, const Proposition& a) {
    std::string x(t.binderOf(i));
    scope_.emplace_back(x, a);
    path_.push_back(i);
    Res r = synth(t.child(i));
    if (!r.used.count(x) && !r.slack) {
      report(TypeErrorKind::UnusedVar, t.child(i), "bound variable '" + x + "' is never used");
      starNote(t.child(i));
    }
    r.used.erase(x);
    path_.pop_back();
    scope_.pop_back();
    return r;
  }

  // A proof of ⊤ by a bare a.⋆ cannot consume the variable it was meant to.
  void starNote(const T& body) {
    const T* cur = &body;
    std::size_t depth = 0;
    while (cur->is(TermKind::Scal) || cur->is(TermKind::Inl) || cur->is(TermKind::Inr)) {
      cur = &cur->child(0);
      path_.push_back(0);
      ++depth;
    }
    if (cur->is(TermKind::Star)) {
      report(TypeErrorKind::StarInNonemptyContext, *cur, "a.* only proves unit in the empty context");
    }
    path_.resize(path_.size() - depth);
  }

  Res additive(const T& at, Res a, const Res& b, std::string_view what) {
    if (a.type != b.type) {
      fatal(TypeErrorKind::ConnectiveMismatch, at,
            std::string(what) + " branches have different types " + toString(a.type) + " and " + toString(b.type));
    }
    bool ok = (subset(b.used, a.used) || a.slack) && (subset(a.used, b.used) || b.slack);
    if (!ok) {
      report(TypeErrorKind::ContextMismatch, at,
             std::string(what) + " branches consume different variables " + listNames(a.used) + " and " +
                 listNames(b.used));
    }
    a.used.insert(b.used.begin(), b.used.end());
    a.slack = a.slack && b.slack;
    return a;
  }

  Res additivePair(const T& at, Res a, const Res& b, std::string_view what) {
    bool ok = (subset(b.used, a.used) || a.slack) && (subset(a.used, b.used) || b.slack);
    if (!ok) {
      report(TypeErrorKind::ContextMismatch, at,
             std::string(what) + " components consume different variables " + listNames(a.used) + " and " +
                 listNames(b.used));
    }
    a.used.insert(b.used.begin(), b.used.end());
    a.slack = a.slack && b.slack;
    return a;
  }

  void split(const T& at, Names& acc, bool& slack, const Res& other) {
    for (const std::string& v : other.used) {
      if (acc.count(v)) {
        report(TypeErrorKind::ReusedVar, at, "variable '" + v + "' is used on both sides of a context split");
      }
    }
    acc.insert(other.used.begin(), other.used.end());
    slack = slack || other.slack;
  }

  const Proposition& expectKind(const T& at, const Proposition& p, PropKind k, std::string_view what) {
    if (p.kind() != k) fatal(TypeErrorKind::ConnectiveMismatch, at, std::string(what) + ", found " + toString(p));
    return p;
  }

  Res synth(const T& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->first == t.name()) return {it->second, {t.name()}, false};
        }
        fatal(TypeErrorKind::UnboundVar, t, "unbound variable '" + t.name() + "'");
      }
      case TermKind::Star:
        return {Proposition::top(), {}, false};
      case TermKind::Sum: {
        Res a = child(t, 0);
        Res b = child(t, 1);
        return additive(t, std::move(a), b, "sum");
      }
      case TermKind::Scal:
        return child(t, 0);
      case TermKind::Pair:
      case TermKind::SupPair: {
        Res a = child(t, 0);
        Res b = child(t, 1);
        Proposition type = t.is(TermKind::Pair) ? Proposition::conj(a.type, b.type) : Proposition::sup(a.type, b.type);
        Res r = additivePair(t, std::move(a), b, t.is(TermKind::Pair) ? "pair" : "sup pair");
        r.type = std::move(type);
        return r;
      }
      case TermKind::Inl: {
        Res a = child(t, 0);
        a.type = Proposition::disj(a.type, t.annotation());
        return a;
      }
      case TermKind::Inr: {
        Res a = child(t, 0);
        a.type = Proposition::disj(t.annotation(), a.type);
        return a;
      }
      case TermKind::DBot: {
        Res a = child(t, 0);
        expectKind(t.child(0), a.type, PropKind::Bot, "dbot expects a proof of void");
        return {t.annotation(), std::move(a.used), true};
      }
      case TermKind::Lam: {
        Res body = bound(t, 0, t.annotation());
        body.type = Proposition::imp(t.annotation(), body.type);
        return body;
      }
      case TermKind::DTop:
      case TermKind::App:
      case TermKind::Tensor: {
        Res a = child(t, 0);
        Res b = child(t, 1);
        Proposition type;
        if (t.is(TermKind::DTop)) {
          expectKind(t.child(0), a.type, PropKind::Top, "dtop expects a proof of unit");
          type = b.type;
        } else if (t.is(TermKind::App)) {
          expectKind(t.child(0), a.type, PropKind::Imp, "application of a non-function");
          if (a.type.left() != b.type) {
            fatal(TypeErrorKind::AnnotationMismatch, t.child(1),
                  "argument has type " + toString(b.type) + ", function expects " + toString(a.type.left()));
          }
          type = a.type.right();
        } else {
          if (!isSupShape(a.type) || !isSupShape(b.type)) {
            fatal(TypeErrorKind::ConnectiveMismatch, t,
                  "tensor operands must be built from unit and @, found " + toString(a.type) + " and " +
                      toString(b.type));
          }
          type = tensorType(a.type, b.type);
        }
        split(t, a.used, a.slack, b);
        a.type = std::move(type);
        return a;
      }
      case TermKind::DAnd1:
      case TermKind::DAnd2:
      case TermKind::DSup1:
      case TermKind::DSup2: {
        bool sup = t.is(TermKind::DSup1) || t.is(TermKind::DSup2);
        bool first = t.is(TermKind::DAnd1) || t.is(TermKind::DSup1);
        Res a = child(t, 0);
        expectKind(t.child(0), a.type, sup ? PropKind::Sup : PropKind::And,
                   sup ? "projection expects an @ proof" : "projection expects an & proof");
        Res b = bound(t, 1, first ? a.type.left() : a.type.right());
        split(t, a.used, a.slack, b);
        a.type = b.type;
        return a;
      }
      case TermKind::DOr:
      case TermKind::DSup: {
        bool sup = t.is(TermKind::DSup);
        Res a = child(t, 0);
        expectKind(t.child(0), a.type, sup ? PropKind::Sup : PropKind::Or,
                   sup ? "dsup expects an @ proof" : "dor expects a | proof");
        Res u = bound(t, 1, a.type.left());
        Res v = bound(t, 2, a.type.right());
        Res branches = additive(t, std::move(u), v, sup ? "dsup" : "dor");
        split(t, a.used, a.slack, branches);
        a.type = branches.type;
        return a;
      }
    }
    fatal(TypeErrorKind::ConnectiveMismatch, t, "unknown term");
  }

  std::vector<std::pair<std::string, Proposition>> scope_;
  std::vector<Diagnostic> diags_;
  Path path_;
};


std::optional<Context> disjointUnion(const Context& a, const Context& b) {
  Context out = a;
  for (const auto& [name, prop] : b) {
    if (out.contains(name)) return std::nullopt;
    out = out.extended(name, prop);
  }
  return out;
}

bool isSubContext(const Context& small, const Context& big) {
  for (const auto& [name, prop] : small) {
    auto p = big.lookup(name);
    if (!p || *p != prop) return false;
  }
  return true;
}

template <ScalarField S>
class Deriver {
 public:
  using T = Term<S>;
  using D = Derivation<S>;

  D derive(const Context& ctx, const T& t) {
    Synthesis s = synthesize(ctx, t);
    if (!(s.usage.slack || s.usage.used.size() == ctx.size())) {
      throw std::invalid_argument("term is not derivable in exactly the context " + toString(ctx));
    }
    D d{ruleName(t), ctx, t, s.type, {}};
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Star:
        break;
      case TermKind::Sum:
      case TermKind::Pair:
      case TermKind::SupPair:
        d.premises.push_back(derive(ctx, t.child(0)));
        d.premises.push_back(derive(ctx, t.child(1)));
        break;
      case TermKind::Scal:
      case TermKind::Inl:
      case TermKind::Inr:
        d.premises.push_back(derive(ctx, t.child(0)));
        break;
      case TermKind::DBot: {
        Synthesis inner = synthesize(ctx, t.child(0));
        d.premises.push_back(derive(ctx.restricted(inner.usage.used), t.child(0)));
        break;
      }
      case TermKind::Lam:
        d.premises.push_back(boundPremise(ctx, t, 0, t.annotation()));
        break;
      case TermKind::DTop:
      case TermKind::App:
      case TermKind::Tensor: {
        Synthesis a = synthesize(ctx, t.child(0));
        Synthesis b = synthesize(ctx, t.child(1));
        auto [left, right] = splitContext(ctx, a.usage, b.usage.used, b.usage.slack);
        d.premises.push_back(derive(left, t.child(0)));
        d.premises.push_back(derive(right, t.child(1)));
        break;
      }
      case TermKind::DAnd1:
      case TermKind::DAnd2:
      case TermKind::DSup1:
      case TermKind::DSup2: {
        bool first = t.is(TermKind::DAnd1) || t.is(TermKind::DSup1);
        Synthesis a = synthesize(ctx, t.child(0));
        Proposition xa = first ? a.type.left() : a.type.right();
        UsageReport b = branchUsage(ctx, t, 1, xa);
        auto [left, right] = splitContext(ctx, a.usage, b.used, b.slack);
        d.premises.push_back(derive(left, t.child(0)));
        d.premises.push_back(boundPremise(right, t, 1, xa));
        break;
      }
      case TermKind::DOr:
      case TermKind::DSup: {
        Synthesis a = synthesize(ctx, t.child(0));
        UsageReport u = branchUsage(ctx, t, 1, a.type.left());
        UsageReport v = branchUsage(ctx, t, 2, a.type.right());
        Names cont = u.used;
        cont.insert(v.used.begin(), v.used.end());
        auto [left, right] = splitContext(ctx, a.usage, cont, u.slack && v.slack);
        d.premises.push_back(derive(left, t.child(0)));
        d.premises.push_back(boundPremise(right, t, 1, a.type.left()));
        d.premises.push_back(boundPremise(right, t, 2, a.type.right()));
        break;
      }
    }
    return d;
  }

  static std::string ruleName(const T& t) {
    switch (t.kind()) {
      case TermKind::Var: return "ax";
      case TermKind::Star: return "top-i";
      case TermKind::Sum: return "sum";
      case TermKind::Scal: return "prod";
      case TermKind::DTop: return "top-e";
      case TermKind::DBot: return "bot-e";
      case TermKind::Lam: return "imp-i";
      case TermKind::App: return "imp-e";
      case TermKind::Pair: return "and-i";
      case TermKind::DAnd1: return "and-e1";
      case TermKind::DAnd2: return "and-e2";
      case TermKind::Inl: return "or-i1";
      case TermKind::Inr: return "or-i2";
      case TermKind::DOr: return "or-e";
      case TermKind::SupPair: return "sup-i";
      case TermKind::DSup1: return "sup-e1";
      case TermKind::DSup2: return "sup-e2";
      case TermKind::DSup: return "sup-e";
      case TermKind::Tensor: return "tens";
    }
    return "?";
  }

 private:
  // Usage of a bound continuation, excluding its own binder.
  UsageReport branchUsage(const Context& ctx, const T& t, std::size_t i, const Proposition& a) {
    std::string x(t.binderOf(i));
    UsageReport r = synthesize(ctx.extended(x, a), t.child(i)).usage;
    r.used.erase(x);
    return r;
  }

  // Minimal split: each side gets what it uses; leftovers go to a side that
  // can absorb them, preferring the continuation.
  std::pair<Context, Context> splitContext(const Context& ctx, const UsageReport& head, const Names& cont,
                                           bool contSlack) {
    Names left = head.used;
    Names right = cont;
    for (const std::string& n : ctx.names()) {
      if (left.count(n) || right.count(n)) continue;
      (contSlack ? right : left).insert(n);
    }
    return {ctx.restricted(left), ctx.restricted(right)};
  }

  D boundPremise(const Context& delta, const T& t, std::size_t i, const Proposition& a) {
    std::string x(t.binderOf(i));
    T body = t.child(i);
    if (delta.contains(x)) {
      std::set<std::string, std::less<>> avoid;
      for (const auto& n : delta.names()) avoid.insert(n);
      avoid.insert(body.freeVars().begin(), body.freeVars().end());
      std::string fresh = freshName(x, avoid);
      body = substitute(body, x, T::var(fresh));
      x = fresh;
    }
    return derive(delta.extended(x, a), body);
  }
};

template <ScalarField S>
class Verifier {
 public:
  using T = Term<S>;
  using D = Derivation<S>;

  std::optional<std::string> check(const D& d) {
    if (auto bad = local(d)) return "at " + d.rule + " for " + toString(d.context) + ": " + *bad;
    for (const D& p : d.premises) {
      if (auto bad = check(p)) return bad;
    }
    return std::nullopt;
  }

 private:
  static std::optional<std::string> need(bool ok, const char* what) {
    if (ok) return std::nullopt;
    return std::string(what);
  }

  // The premise of a binder rule must be Δ, x′:A with x′ fresh for Δ, and
  // its term the continuation with x renamed to x′.
  static std::optional<std::string> boundOk(const D& p, const Context& delta, const T& t, std::size_t i,
                                            const Proposition& a) {
    if (p.context.size() != delta.size() + 1 || !isSubContext(delta, p.context)) return "binder premise context";
    std::string fresh;
    for (const auto& [n, prop] : p.context) {
      if (!delta.contains(n)) fresh = n;
    }
    if (p.context.lookup(fresh) != a) return "binder premise type";
    T expected = substitute(t.child(i), std::string(t.binderOf(i)), T::var(fresh));
    if (!alphaEq(p.term, expected)) return "binder premise term";
    return std::nullopt;
  }

  std::optional<std::string> local(const D& d) {
    const T& t = d.term;
    if (Deriver<S>::ruleName(t) != d.rule) return "rule does not match the term";
    const auto& ps = d.premises;
    auto arity = [&](std::size_t n) { return ps.size() == n; };
    auto sameTerm = [&](std::size_t i, std::size_t c) { return alphaEq(ps[i].term, t.child(c)); };
    switch (t.kind()) {
      case TermKind::Var:
        return need(arity(0) && d.context.size() == 1 && d.context.lookup(t.name()) == d.type, "axiom");
      case TermKind::Star:
        return need(arity(0) && d.context.empty() && d.type == Proposition::top(), "unit introduction");
      case TermKind::Sum:
        return need(arity(2) && ps[0].context == d.context && ps[1].context == d.context && ps[0].type == d.type &&
                        ps[1].type == d.type && sameTerm(0, 0) && sameTerm(1, 1),
                    "sum");
      case TermKind::Scal:
        return need(arity(1) && ps[0].context == d.context && ps[0].type == d.type && sameTerm(0, 0), "prod");
      case TermKind::Pair:
      case TermKind::SupPair: {
        Proposition want = t.is(TermKind::Pair) ? Proposition::conj(ps.at(0).type, ps.at(1).type)
                                                : Proposition::sup(ps.at(0).type, ps.at(1).type);
        return need(arity(2) && ps[0].context == d.context && ps[1].context == d.context && d.type == want &&
                        sameTerm(0, 0) && sameTerm(1, 1),
                    "pair introduction");
      }
      case TermKind::Inl:
      case TermKind::Inr: {
        if (!arity(1)) return "injection arity";
        Proposition want = t.is(TermKind::Inl) ? Proposition::disj(ps[0].type, t.annotation())
                                               : Proposition::disj(t.annotation(), ps[0].type);
        return need(ps[0].context == d.context && d.type == want && sameTerm(0, 0), "injection");
      }
      case TermKind::DBot:
        return need(arity(1) && isSubContext(ps[0].context, d.context) && ps[0].type == Proposition::bot() &&
                        d.type == t.annotation() && sameTerm(0, 0),
                    "void elimination");
      case TermKind::Lam: {
        if (!arity(1)) return "lambda arity";
        if (d.type != Proposition::imp(t.annotation(), ps[0].type)) return "lambda type";
        return boundOk(ps[0], d.context, t, 0, t.annotation());
      }
      case TermKind::DTop:
      case TermKind::App:
      case TermKind::Tensor: {
        if (!arity(2)) return "elimination arity";
        auto u = disjointUnion(ps[0].context, ps[1].context);
        if (!u || !(*u == d.context)) return "context split";
        if (!sameTerm(0, 0) || !sameTerm(1, 1)) return "premise terms";
        if (t.is(TermKind::DTop)) return need(ps[0].type == Proposition::top() && ps[1].type == d.type, "unit elimination");
        if (t.is(TermKind::App)) return need(ps[0].type == Proposition::imp(ps[1].type, d.type), "modus ponens");
        return need(isSupShape(ps[0].type) && isSupShape(ps[1].type) && d.type == tensorType(ps[0].type, ps[1].type),
                    "tensor");
      }
      case TermKind::DAnd1:
      case TermKind::DAnd2:
      case TermKind::DSup1:
      case TermKind::DSup2: {
        if (!arity(2)) return "projection arity";
        PropKind k = t.is(TermKind::DAnd1) || t.is(TermKind::DAnd2) ? PropKind::And : PropKind::Sup;
        const Proposition& a = ps[0].type;
        if (a.kind() != k || !sameTerm(0, 0)) return "projection scrutinee";
        if (!isSubContext(ps[0].context, d.context)) return "projection context";
        Context delta = d.context;
        for (const auto& n : ps[0].context.names()) delta = delta.without(n);
        if (ps[0].context.size() + delta.size() != d.context.size()) return "projection context";
        bool first = t.is(TermKind::DAnd1) || t.is(TermKind::DSup1);
        if (ps[1].type != d.type) return "projection result";
        return boundOk(ps[1], delta, t, 1, first ? a.left() : a.right());
      }
      case TermKind::DOr:
      case TermKind::DSup: {
        if (!arity(3)) return "case arity";
        PropKind k = t.is(TermKind::DOr) ? PropKind::Or : PropKind::Sup;
        const Proposition& a = ps[0].type;
        if (a.kind() != k || !sameTerm(0, 0)) return "case scrutinee";
        if (!isSubContext(ps[0].context, d.context)) return "case context";
        Context delta = d.context;
        for (const auto& n : ps[0].context.names()) delta = delta.without(n);
        if (ps[1].type != d.type || ps[2].type != d.type) return "case result";
        if (auto bad = boundOk(ps[1], delta, t, 1, a.left())) return bad;
        return boundOk(ps[2], delta, t, 2, a.right());
      }
    }
    return "unknown rule";
  }
};

}  // namespace

namespace detail {

template <ScalarField S>
Synthesis TypingImpl<S>::synthesize(const Context& ctx, const Term<S>& t) {
  auto r = Checker<S>(ctx).run(t);
  return {std::move(r.type), {std::move(r.used), r.slack}};
}

template <ScalarField S>
Derivation<S> TypingImpl<S>::derive(const Context& ctx, const Term<S>& t) {
  return Deriver<S>().derive(ctx, t);
}

template <ScalarField S>
std::optional<std::string> TypingImpl<S>::verify(const Derivation<S>& d) {
  return Verifier<S>().check(d);
}

template struct TypingImpl<Rational>;
template struct TypingImpl<GaussianRational>;

}  // namespace detail

}  // namespace lsodot
