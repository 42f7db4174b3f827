#include "lsodot/rewrite.hpp"

#include "lsodot/kernel.hpp"

namespace lsodot {

std::string_view toString(RuleId r) {
  switch (r) {
    case RuleId::BetaTop: return "BetaTop";
    case RuleId::BetaArrow: return "BetaArrow";
    case RuleId::BetaAnd1: return "BetaAnd1";
    case RuleId::BetaAnd2: return "BetaAnd2";
    case RuleId::BetaOr1: return "BetaOr1";
    case RuleId::BetaOr2: return "BetaOr2";
    case RuleId::SumStar: return "SumStar";
    case RuleId::SumLam: return "SumLam";
    case RuleId::SumPair: return "SumPair";
    case RuleId::OrCommSum: return "OrCommSum";
    case RuleId::ProdStar: return "ProdStar";
    case RuleId::ProdLam: return "ProdLam";
    case RuleId::ProdPair: return "ProdPair";
    case RuleId::OrCommProd: return "OrCommProd";
    case RuleId::BetaSup1: return "BetaSup1";
    case RuleId::BetaSup2: return "BetaSup2";
    case RuleId::BetaSupL: return "BetaSupL";
    case RuleId::BetaSupR: return "BetaSupR";
    case RuleId::SumSup: return "SumSup";
    case RuleId::ProdSup: return "ProdSup";
    case RuleId::TensorSup: return "TensorSup";
    case RuleId::TensorStar: return "TensorStar";
  }
  return "?";
}

namespace {

constexpr std::uint8_t kNormal = 1;

template <ScalarField S>
std::optional<RuleId> matchRoot(const Term<S>& t) {
  auto head = [&](std::size_t i) { return t.child(i).kind(); };
  switch (t.kind()) {
    case TermKind::DTop:
      if (head(0) == TermKind::Star) return RuleId::BetaTop;
      break;
    case TermKind::App:
      if (head(0) == TermKind::Lam) return RuleId::BetaArrow;
      break;
    case TermKind::DAnd1:
      if (head(0) == TermKind::Pair) return RuleId::BetaAnd1;
      break;
    case TermKind::DAnd2:
      if (head(0) == TermKind::Pair) return RuleId::BetaAnd2;
      break;
    case TermKind::DOr:
      switch (head(0)) {
        case TermKind::Inl: return RuleId::BetaOr1;
        case TermKind::Inr: return RuleId::BetaOr2;
        case TermKind::Sum: return RuleId::OrCommSum;
        case TermKind::Scal: return RuleId::OrCommProd;
        default: break;
      }
      break;
    case TermKind::Sum:
      if (head(0) != head(1)) break;
      switch (head(0)) {
        case TermKind::Star: return RuleId::SumStar;
        case TermKind::Lam:
          if (t.child(0).annotation() == t.child(1).annotation()) return RuleId::SumLam;
          break;
        case TermKind::Pair: return RuleId::SumPair;
        case TermKind::SupPair: return RuleId::SumSup;
        default: break;
      }
      break;
    case TermKind::Scal:
      switch (head(0)) {
        case TermKind::Star: return RuleId::ProdStar;
        case TermKind::Lam: return RuleId::ProdLam;
        case TermKind::Pair: return RuleId::ProdPair;
        case TermKind::SupPair: return RuleId::ProdSup;
        default: break;
      }
      break;
    case TermKind::DSup1:
      if (head(0) == TermKind::SupPair) return RuleId::BetaSup1;
      break;
    case TermKind::DSup2:
      if (head(0) == TermKind::SupPair) return RuleId::BetaSup2;
      break;
    case TermKind::Tensor:
      if (head(0) == TermKind::SupPair) return RuleId::TensorSup;
      if (head(0) == TermKind::Star) return RuleId::TensorStar;
      break;
    default:
      break;
  }
  return std::nullopt;
}

template <ScalarField S>
Term<S> contract(const Term<S>& t, RuleId rule) {
  using T = Term<S>;
  const T& a = t.child(0);
  auto binder = [&](std::size_t i) { return std::string(t.binderOf(i)); };
  switch (rule) {
    case RuleId::BetaTop:
      return T::scal(a.scalar(), t.child(1));
    case RuleId::BetaArrow:
      return substitute(a.child(0), a.binders()[0], t.child(1));
    case RuleId::BetaAnd1:
    case RuleId::BetaSup1:
    case RuleId::BetaSupL:
      return substitute(t.child(1), binder(1), a.child(0));
    case RuleId::BetaAnd2:
    case RuleId::BetaSup2:
      return substitute(t.child(1), binder(1), a.child(1));
    case RuleId::BetaSupR:
      return substitute(t.child(2), binder(2), a.child(1));
    case RuleId::BetaOr1:
      return substitute(t.child(1), binder(1), a.child(0));
    case RuleId::BetaOr2:
      return substitute(t.child(2), binder(2), a.child(0));
    case RuleId::OrCommSum:
      return T::sum(t.withChild(0, a.child(0)), t.withChild(0, a.child(1)));
    case RuleId::OrCommProd:
      return T::scal(a.scalar(), t.withChild(0, a.child(0)));
    case RuleId::SumStar:
      return T::star(a.scalar() + t.child(1).scalar());
    case RuleId::SumLam: {
      const T& b = t.child(1);
      const std::string& x = a.binders()[0];
      const std::string& y = b.binders()[0];
      std::string z = x;
      T left = a.child(0);
      T right = b.child(0);
      if (x != y) {
        if (b.hasFree(x)) {
          std::set<std::string, std::less<>> avoid(a.freeVars().begin(), a.freeVars().end());
          avoid.insert(b.freeVars().begin(), b.freeVars().end());
          avoid.insert(x);
          avoid.insert(y);
          z = freshName(x, avoid);
          left = substitute(left, x, T::var(z));
        }
        right = substitute(right, y, T::var(z));
      }
      return T::lam(z, a.annotation(), T::sum(std::move(left), std::move(right)));
    }
    case RuleId::SumPair:
      return T::pair(T::sum(a.child(0), t.child(1).child(0)), T::sum(a.child(1), t.child(1).child(1)));
    case RuleId::SumSup:
      return T::supPair(T::sum(a.child(0), t.child(1).child(0)), T::sum(a.child(1), t.child(1).child(1)));
    case RuleId::ProdStar:
      return T::star(t.scalar() * a.scalar());
    case RuleId::ProdLam:
      return T::lam(a.binders()[0], a.annotation(), T::scal(t.scalar(), a.child(0)));
    case RuleId::ProdPair:
      return T::pair(T::scal(t.scalar(), a.child(0)), T::scal(t.scalar(), a.child(1)));
    case RuleId::ProdSup:
      return T::supPair(T::scal(t.scalar(), a.child(0)), T::scal(t.scalar(), a.child(1)));
    case RuleId::TensorSup:
      return T::supPair(T::tensor(a.child(0), t.child(1)), T::tensor(a.child(1), t.child(1)));
    case RuleId::TensorStar:
      return T::scal(a.scalar(), t.child(1));
  }
  throw std::logic_error("unknown rule");
}

struct Found {
  Path path;
  bool choice;
};

template <ScalarField S>
bool normalAt(const Term<S>& t);

// Closed, irreducible components: the only dsup redexes the strategy fires.
template <ScalarField S>
bool choiceReady(const Term<S>& t) {
  if (!t.is(TermKind::DSup) || !t.child(0).is(TermKind::SupPair)) return false;
  const Term<S>& u1 = t.child(0).child(0);
  const Term<S>& u2 = t.child(0).child(1);
  return u1.isClosed() && u2.isClosed() && normalAt(u1) && normalAt(u2);
}

template <ScalarField S>
bool findFirst(const Term<S>& t, Path& path, bool& choice) {
  if (t.normalCache() == kNormal) return false;
  if (matchRoot(t)) {
    choice = false;
    return true;
  }
  if (choiceReady(t)) {
    choice = true;
    return true;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    if (findFirst(t.child(i), path, choice)) return true;
    path.pop_back();
  }
  t.setNormalCache(kNormal);
  return false;
}

template <ScalarField S>
bool normalAt(const Term<S>& t) {
  Path p;
  bool choice = false;
  return !findFirst(t, p, choice);
}

template <ScalarField S>
std::optional<Found> first(const Term<S>& t) {
  Path p;
  bool choice = false;
  if (!findFirst(t, p, choice)) return std::nullopt;
  return Found{std::move(p), choice};
}

template <ScalarField S>
void collect(const Term<S>& t, Path& path, std::vector<Path>& out, bool& anyChoice) {
  if (t.normalCache() == kNormal) return;
  if (matchRoot(t)) {
    out.push_back(path);
  } else if (choiceReady(t)) {
    anyChoice = true;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    collect(t.child(i), path, out, anyChoice);
    path.pop_back();
  }
}

template <ScalarField S>
const Term<S>& subtermAt(const Term<S>& t, const Path& p) {
  try {
    return t.at(p);
  } catch (const std::out_of_range&) {
    throw InvalidPath(p);
  }
}

template <ScalarField S>
Term<S> measure(const Term<S>& sub, bool left) {
  return contract(sub, left ? RuleId::BetaSupL : RuleId::BetaSupR);
}

// Leftmost-outermost without rebuilding the whole spine on every step. A
// subterm is reduced until a step fires at its own root or it is normal, and
// only then returns to its parent, which re-checks its root. Every rule
// matches on the heads of the children, and a ready measurement needs its
// pair normal, so this fires exactly the steps `first` would, in order.
template <ScalarField S>
struct LocalNormalizer {
  const RewriteOptions& opts;
  std::size_t steps = 0;
  Path path;

  Term<S> run(Term<S> t, bool stopOnHeadChange) {
    while (t.normalCache() != kNormal) {
      if (auto rule = matchRoot(t)) {
        if (++steps > opts.budget) throw StepBudgetExceeded(opts.budget);
        t = contract(t, *rule);
        if (stopOnHeadChange) return t;
        continue;
      }
      if (choiceReady(t)) throw StuckOnNondeterminism(path);
      std::size_t i = 0;
      while (i < t.arity() && normalAt(t.child(i))) ++i;
      if (i == t.arity()) {
        t.setNormalCache(kNormal);
        break;
      }
      path.push_back(i);
      Term<S> c = run(t.child(i), true);
      path.pop_back();
      t = t.withChild(i, std::move(c));
    }
    return t;
  }
};

}  // namespace

namespace detail {

template <ScalarField S>
std::optional<Step<S>> RewriteImpl<S>::contractRoot(const T& t) {
  auto rule = matchRoot(t);
  if (!rule) return std::nullopt;
  return Step<S>{*rule, contract(t, *rule)};
}

template <ScalarField S>
std::optional<Step<S>> RewriteImpl<S>::step(const T& t, const Path& p) {
  auto s = contractRoot(subtermAt(t, p));
  if (!s) return std::nullopt;
  s->after = t.replacedAt(p, std::move(s->after));
  return s;
}

template <ScalarField S>
std::vector<Path> RewriteImpl<S>::redexPaths(const T& t) {
  std::vector<Path> out;
  Path p;
  bool anyChoice = false;
  collect(t, p, out, anyChoice);
  return out;
}

template <ScalarField S>
bool RewriteImpl<S>::isNormal(const T& t) {
  return normalAt(t);
}

template <ScalarField S>
std::optional<Path> RewriteImpl<S>::firstChoice(const T& t) {
  Path p;
  std::optional<Path> found;
  std::function<void(const T&)> walk = [&](const T& s) {
    if (found || s.normalCache() == kNormal) return;
    if (choiceReady(s)) {
      found = p;
      return;
    }
    for (std::size_t i = 0; i < s.arity(); ++i) {
      p.push_back(i);
      walk(s.child(i));
      p.pop_back();
    }
  };
  walk(t);
  return found;
}

template <ScalarField S>
Term<S> RewriteImpl<S>::normalize(const T& t, const RewriteOptions& opts, Trace<S>* trace) {
  if (!trace) return LocalNormalizer<S>{opts}.run(t, false);
  T cur = t;
  std::size_t steps = 0;
  while (auto f = first(cur)) {
    if (f->choice) throw StuckOnNondeterminism(f->path);
    if (++steps > opts.budget) throw StepBudgetExceeded(opts.budget);
    const T& sub = cur.at(f->path);
    RuleId rule = *matchRoot(sub);
    T after = contract(sub, rule);
    cur = cur.replacedAt(f->path, std::move(after));
    if (trace) trace->steps.push_back({rule, f->path, cur, std::nullopt});
  }
  return cur;
}

template <ScalarField S>
Term<S> RewriteImpl<S>::normalizeRandomOrder(const T& t, Rng& rng, const RewriteOptions& opts) {
  T cur = t;
  std::size_t steps = 0;
  while (true) {
    std::vector<Path> paths;
    Path p;
    bool anyChoice = false;
    collect(cur, p, paths, anyChoice);
    if (paths.empty()) {
      if (anyChoice) throw StuckOnNondeterminism(*firstChoice(cur));
      return cur;
    }
    if (++steps > opts.budget) throw StepBudgetExceeded(opts.budget);
    const Path& at = paths[rng.below(paths.size())];
    const T& sub = cur.at(at);
    cur = cur.replacedAt(at, contract(sub, *matchRoot(sub)));
  }
}

template <ScalarField S>
Term<S> RewriteImpl<S>::sampleNormalize(const T& t, Rng& rng, const Weigher<S>& weigher, const RewriteOptions& opts,
                                        Trace<S>* trace) {
  T cur = t;
  std::size_t steps = 0;
  while (auto f = first(cur)) {
    if (++steps > opts.budget) throw StepBudgetExceeded(opts.budget);
    const T& sub = cur.at(f->path);
    if (f->choice) {
      Rational p = weigher(sub.child(0).child(0), sub.child(0).child(1));
      if (p < Rational(0)) p = Rational(0);
      if (p > Rational(1)) p = Rational(1);
      bool left = rng.bernoulli(p);
      cur = cur.replacedAt(f->path, measure(sub, left));
      if (trace) {
        trace->steps.push_back(
            {left ? RuleId::BetaSupL : RuleId::BetaSupR, f->path, cur, left ? p : Rational(1) - p});
      }
      continue;
    }
    RuleId rule = *matchRoot(sub);
    cur = cur.replacedAt(f->path, contract(sub, rule));
    if (trace) trace->steps.push_back({rule, f->path, cur, std::nullopt});
  }
  return cur;
}

template <ScalarField S>
std::optional<std::size_t> RewriteImpl<S>::replay(const Trace<S>& trace) {
  T cur = trace.start;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep<S>& s = trace.steps[i];
    const T* sub = nullptr;
    try {
      sub = &cur.at(s.path);
    } catch (const std::out_of_range&) {
      return i;
    }
    T after = cur;
    if (s.rule == RuleId::BetaSupL || s.rule == RuleId::BetaSupR) {
      if (!sub->is(TermKind::DSup) || !sub->child(0).is(TermKind::SupPair)) return i;
      after = cur.replacedAt(s.path, measure(*sub, s.rule == RuleId::BetaSupL));
    } else {
      auto rule = matchRoot(*sub);
      if (!rule || *rule != s.rule) return i;
      after = cur.replacedAt(s.path, contract(*sub, *rule));
    }
    if (after != s.after) return i;
    cur = std::move(after);
  }
  return std::nullopt;
}

template struct RewriteImpl<Rational>;
template struct RewriteImpl<GaussianRational>;

}  // namespace detail

}  // namespace lsodot
