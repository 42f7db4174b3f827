#include "lsodot/metatheory.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "lsodot/kernel.hpp"
#include "lsodot/rewrite.hpp"
#include "lsodot/syntax.hpp"
#include "lsodot/vectors.hpp"

namespace lsodot {

void GenConfig::validate() const {
  if (maxDepth < 1) throw std::invalid_argument("maxDepth must be at least 1");
  if (maxPropDepth < 0) throw std::invalid_argument("maxPropDepth must be non-negative");
  if (scalars.empty()) throw std::invalid_argument("scalar pool is empty");
  if (retries < 1) throw std::invalid_argument("retries must be at least 1");
  const double pw[] = {props.top, props.bot, props.imp, props.conj, props.disj, props.sup};
  const double rw[] = {rules.sum, rules.prod, rules.cut, rules.dsup, rules.tensor};
  double total = 0;
  for (double w : pw) {
    if (!(w >= 0)) throw std::invalid_argument("proposition weights must be non-negative");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("all proposition weights are zero");
  if (props.top <= 0) throw std::invalid_argument("the unit weight must be positive");
  for (double w : rw) {
    if (!(w >= 0)) throw std::invalid_argument("rule weights must be non-negative");
  }
}

namespace {

double uniform(Rng& rng) { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }

// Index drawn proportionally to w; w must have a positive entry.
std::size_t pick(Rng& rng, const std::vector<double>& w) {
  double total = 0;
  for (double x : w) total += x;
  double r = uniform(rng) * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) continue;
    if (r < w[i]) return i;
    r -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0) return i;
  }
  return 0;
}

bool coin(Rng& rng) { return (rng.next() >> 63) != 0; }

// Any other proof can be dropped after eliminating x:a.
bool discardable(const Proposition& a) {
  switch (a.kind()) {
    case PropKind::Top:
    case PropKind::Bot: return true;
    case PropKind::And:
    case PropKind::Sup: return discardable(a.left()) || discardable(a.right());
    case PropKind::Or: return discardable(a.left()) && discardable(a.right());
    case PropKind::Imp: return likelyInhabited(a.left()) && discardable(a.right());
  }
  return false;
}

// x:a proves anything.
bool explosive(const Proposition& a) {
  switch (a.kind()) {
    case PropKind::Bot: return true;
    case PropKind::Top: return false;
    case PropKind::And:
    case PropKind::Sup: return explosive(a.left()) || explosive(a.right());
    case PropKind::Or: return explosive(a.left()) && explosive(a.right());
    case PropKind::Imp: return likelyInhabited(a.left()) && explosive(a.right());
  }
  return false;
}

// b with every maximal occurrence of c replaced by ⊤, if b is ⊙-built over c.
std::optional<Proposition> abstractOver(const Proposition& b, const Proposition& c) {
  if (b == c) return Proposition::top();
  if (b.kind() != PropKind::Sup) return std::nullopt;
  auto l = abstractOver(b.left(), c);
  auto r = abstractOver(b.right(), c);
  if (!l || !r) return std::nullopt;
  return Proposition::sup(*l, *r);
}

void subtrees(const Proposition& p, std::vector<Proposition>& out) {
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  if (p.kind() == PropKind::Sup) {
    subtrees(p.left(), out);
    subtrees(p.right(), out);
  }
}

}  // namespace

bool likelyInhabited(const Proposition& a) {
  switch (a.kind()) {
    case PropKind::Top: return true;
    case PropKind::Bot: return false;
    case PropKind::And:
    case PropKind::Sup: return likelyInhabited(a.left()) && likelyInhabited(a.right());
    case PropKind::Or: return likelyInhabited(a.left()) || likelyInhabited(a.right());
    case PropKind::Imp:
      return a.left() == a.right() || explosive(a.left()) ||
             (likelyInhabited(a.right()) && discardable(a.left()));
  }
  return false;
}

Proposition generateProp(const GenConfig& cfg, Rng& rng, int depth) {
  const PropWeights& w = cfg.props;
  std::vector<double> weights = {w.top, w.bot};
  if (depth > 0) {
    weights.insert(weights.end(), {w.imp, w.conj, w.disj, w.sup});
  } else if (w.top <= 0 && w.bot <= 0) {
    return Proposition::top();
  }
  switch (pick(rng, weights)) {
    case 0: return Proposition::top();
    case 1: return Proposition::bot();
    case 2: {
      Proposition l = generateProp(cfg, rng, depth - 1);
      return Proposition::imp(l, generateProp(cfg, rng, depth - 1));
    }
    case 3: {
      Proposition l = generateProp(cfg, rng, depth - 1);
      return Proposition::conj(l, generateProp(cfg, rng, depth - 1));
    }
    case 4: {
      Proposition l = generateProp(cfg, rng, depth - 1);
      return Proposition::disj(l, generateProp(cfg, rng, depth - 1));
    }
    default: {
      Proposition l = generateProp(cfg, rng, depth - 1);
      return Proposition::sup(l, generateProp(cfg, rng, depth - 1));
    }
  }
}

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return !c.passed; }));
}

const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names = {"subject-reduction", "confluence", "termination", "mu-subst",
                                                 "mu-red",            "vecspace",   "linearity",   "introduction"};
  return names;
}

namespace {

// ------------------------------------------------------------- generator --

template <ScalarField S>
class Generator {
  using T = Term<S>;

 public:
  struct Hyp {
    std::string name;
    Proposition prop;
  };
  using Hyps = std::vector<Hyp>;

  Generator(const GenConfig& cfg, Rng& rng, std::set<std::string, std::less<>> reserved)
      : cfg_(cfg), rng_(rng), reserved_(std::move(reserved)) {}

  std::optional<T> run(const Hyps& g, const Proposition& a) {
    fuel_ = cfg_.fuel;
    counter_ = 0;
    return gen(g, a, cfg_.maxDepth);
  }

  S scalar() {
    const Rational& r = cfg_.scalars[rng_.below(cfg_.scalars.size())];
    return *ScalarTraits<S>::fromParts(r, Rational(0));
  }

  Proposition prop() { return generateProp(cfg_, rng_, cfg_.maxPropDepth); }

  Proposition inhabitedProp() {
    for (int i = 0; i < 50; ++i) {
      Proposition p = prop();
      if (likelyInhabited(p)) return p;
    }
    return Proposition::top();
  }

 private:
  enum class Move { Star, Axiom, Intro, Elim, Explode, Sum, Scal, Cut, Tensor };

  std::string fresh() {
    for (;;) {
      std::string x = "x" + std::to_string(counter_++);
      if (!reserved_.count(x)) return x;
    }
  }

  std::pair<Hyps, Hyps> split(const Hyps& g) {
    std::pair<Hyps, Hyps> out;
    for (const Hyp& h : g) (coin(rng_) ? out.first : out.second).push_back(h);
    return out;
  }

  static Hyps with(Hyps g, std::string x, Proposition p) {
    g.push_back({std::move(x), std::move(p)});
    return g;
  }

  std::optional<T> gen(const Hyps& g, const Proposition& a, int depth) {
    if (fuel_ == 0) return std::nullopt;
    --fuel_;
    bool grow = depth > 0;
    std::vector<Move> moves;
    std::vector<double> weights;
    auto add = [&](Move m, double w) {
      if (w > 0) {
        moves.push_back(m);
        weights.push_back(w);
      }
    };
    bool hasBot = std::any_of(g.begin(), g.end(), [](const Hyp& h) { return h.prop.kind() == PropKind::Bot; });
    if (g.empty() && a.kind() == PropKind::Top) add(Move::Star, grow ? 2 : 10);
    if (g.size() == 1 && g[0].prop == a) add(Move::Axiom, grow ? 2 : 10);
    if (a.kind() != PropKind::Top && a.kind() != PropKind::Bot) add(Move::Intro, 3);
    if (!g.empty()) add(Move::Elim, 3);
    if (hasBot) add(Move::Explode, grow ? 0.5 : 4);
    if (grow) {
      add(Move::Sum, cfg_.rules.sum);
      add(Move::Scal, cfg_.rules.prod);
      add(Move::Cut, cfg_.rules.cut);
      if (isSupShape(a)) add(Move::Tensor, cfg_.rules.tensor);
    }
    while (!moves.empty()) {
      std::size_t i = pick(rng_, weights);
      Move m = moves[i];
      moves.erase(moves.begin() + static_cast<std::ptrdiff_t>(i));
      weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto t = attempt(m, g, a, depth)) return t;
      if (fuel_ == 0) return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<T> attempt(Move m, const Hyps& g, const Proposition& a, int depth) {
    int d = depth - 1;
    switch (m) {
      case Move::Star: return T::star(scalar());
      case Move::Axiom: return T::var(g[0].name);
      case Move::Intro: return intro(g, a, d);
      case Move::Elim: {
        std::size_t i = rng_.below(g.size());
        Hyps rest = g;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        return elim(g[i], rest, a, d);
      }
      case Move::Explode: {
        for (const Hyp& h : g) {
          if (h.prop.kind() == PropKind::Bot) return T::dbot(a, T::var(h.name));
        }
        return std::nullopt;
      }
      case Move::Sum: {
        auto l = gen(g, a, d);
        if (!l) return std::nullopt;
        auto r = gen(g, a, d);
        if (!r) return std::nullopt;
        return T::sum(*l, *r);
      }
      case Move::Scal: {
        auto t = gen(g, a, d);
        if (!t) return std::nullopt;
        return T::scal(scalar(), *t);
      }
      case Move::Cut: return cut(g, a, d);
      case Move::Tensor: return tensor(g, a, d);
    }
    return std::nullopt;
  }

  std::optional<T> intro(const Hyps& g, const Proposition& a, int d) {
    switch (a.kind()) {
      case PropKind::Imp: {
        std::string x = fresh();
        auto body = gen(with(g, x, a.left()), a.right(), d);
        if (!body) return std::nullopt;
        return T::lam(x, a.left(), *body);
      }
      case PropKind::And:
      case PropKind::Sup: {
        auto l = gen(g, a.left(), d);
        if (!l) return std::nullopt;
        auto r = gen(g, a.right(), d);
        if (!r) return std::nullopt;
        return a.kind() == PropKind::And ? T::pair(*l, *r) : T::supPair(*l, *r);
      }
      case PropKind::Or: {
        bool left = coin(rng_);
        for (int k = 0; k < 2; ++k, left = !left) {
          auto t = gen(g, left ? a.left() : a.right(), d);
          if (t) return left ? T::inl(a.right(), *t) : T::inr(a.left(), *t);
        }
        return std::nullopt;
      }
      default: return std::nullopt;
    }
  }

  // Eliminates the hypothesis h, continuing with rest.
  std::optional<T> elim(const Hyp& h, const Hyps& rest, const Proposition& a, int d) {
    T x = T::var(h.name);
    const Proposition& p = h.prop;
    switch (p.kind()) {
      case PropKind::Top: {
        auto u = gen(rest, a, d);
        if (!u) return std::nullopt;
        return T::dtop(x, *u);
      }
      case PropKind::Bot: return T::dbot(a, x);
      case PropKind::Imp: {
        auto [g1, g2] = split(rest);
        auto arg = gen(g1, p.left(), d);
        if (!arg) return std::nullopt;
        std::string y = fresh();
        auto k = gen(with(g2, y, p.right()), a, d);
        if (!k) return std::nullopt;
        return substitute(*k, y, T::app(x, *arg));
      }
      case PropKind::And:
      case PropKind::Sup:
        return project(x, p, rest, a, d, p.kind() == PropKind::Sup);
      case PropKind::Or: return cases(x, p, rest, a, d, false);
    }
    return std::nullopt;
  }

  std::optional<T> project(const T& scrut, const Proposition& p, const Hyps& rest, const Proposition& a, int d,
                           bool sup) {
    if (sup && cfg_.rules.dsup > 0 && uniform(rng_) < cfg_.rules.dsup / (1 + cfg_.rules.dsup)) {
      return cases(scrut, p, rest, a, d, true);
    }
    bool first = coin(rng_);
    std::string y = fresh();
    auto body = gen(with(rest, y, first ? p.left() : p.right()), a, d);
    if (!body) return std::nullopt;
    if (sup) return first ? T::dsup1(scrut, y, *body) : T::dsup2(scrut, y, *body);
    return first ? T::dand1(scrut, y, *body) : T::dand2(scrut, y, *body);
  }

  std::optional<T> cases(const T& scrut, const Proposition& p, const Hyps& rest, const Proposition& a, int d,
                         bool sup) {
    std::string y = fresh();
    auto l = gen(with(rest, y, p.left()), a, d);
    if (!l) return std::nullopt;
    std::string z = fresh();
    auto r = gen(with(rest, z, p.right()), a, d);
    if (!r) return std::nullopt;
    return sup ? T::dsup(scrut, y, *l, z, *r) : T::dor(scrut, y, *l, z, *r);
  }

  // A detour through a cut formula: an introduction met by its elimination.
  std::optional<T> cut(const Hyps& g, const Proposition& a, int d) {
    auto [g1, g2] = split(g);
    const PropWeights& w = cfg_.props;
    std::size_t kind = pick(rng_, {1.0, w.top > 0 ? 0.5 : 0.0, w.conj, w.disj, w.sup});
    auto inhabited = [&] { return g1.empty() ? inhabitedProp() : prop(); };
    switch (kind) {
      case 0: {
        Proposition c = inhabited();
        auto arg = gen(g1, c, d);
        if (!arg) return std::nullopt;
        std::string y = fresh();
        auto body = gen(with(g2, y, c), a, d);
        if (!body) return std::nullopt;
        return T::app(T::lam(y, c, *body), *arg);
      }
      case 1: {
        auto t = gen(g1, Proposition::top(), d);
        if (!t) return std::nullopt;
        auto u = gen(g2, a, d);
        if (!u) return std::nullopt;
        return T::dtop(*t, *u);
      }
      default: {
        Proposition c = inhabited();
        Proposition e = inhabited();
        PropKind k = kind == 2 ? PropKind::And : kind == 3 ? PropKind::Or : PropKind::Sup;
        Proposition p = Proposition::binary(k, c, e);
        auto t = gen(g1, p, d);
        if (!t) return std::nullopt;
        if (k == PropKind::Or) return cases(*t, p, g2, a, d, false);
        return project(*t, p, g2, a, d, k == PropKind::Sup);
      }
    }
  }

  std::optional<T> tensor(const Hyps& g, const Proposition& a, int d) {
    std::vector<Proposition> cands;
    subtrees(a, cands);
    const Proposition& c = cands[rng_.below(cands.size())];
    auto b = abstractOver(a, c);
    if (!b) return std::nullopt;
    auto [g1, g2] = split(g);
    auto l = gen(g1, *b, d);
    if (!l) return std::nullopt;
    auto r = gen(g2, c, d);
    if (!r) return std::nullopt;
    return T::tensor(*l, *r);
  }

  const GenConfig& cfg_;
  Rng& rng_;
  std::set<std::string, std::less<>> reserved_;
  std::size_t fuel_ = 0;
  int counter_ = 0;
};

template <ScalarField S>
typename Generator<S>::Hyps hypsOf(const Context& ctx) {
  typename Generator<S>::Hyps g;
  for (const auto& [name, p] : ctx) g.push_back({name, p});
  return g;
}

template <ScalarField S>
std::set<std::string, std::less<>> reservedOf(const Context& ctx) {
  std::set<std::string, std::less<>> r{std::string(kHole)};
  for (const auto& [name, p] : ctx) r.insert(name);
  return r;
}

template <ScalarField S>
void selfCheck(const Context& ctx, const Term<S>& t, const Proposition& a) {
  Synthesis s = synthesize(ctx, t);
  if (s.type != a || !derivableIn(ctx, t)) {
    throw std::logic_error("generator produced " + printTerm(t) + " which does not have type " + toString(a) +
                           " in " + toString(ctx));
  }
}

// One attempt; nullopt when the budget ran out.
template <ScalarField S>
std::optional<Term<S>> attemptIn(const GenConfig& cfg, Rng& rng, const Context& ctx, const Proposition& a) {
  Generator<S> gen(cfg, rng, reservedOf<S>(ctx));
  auto t = gen.run(hypsOf<S>(ctx), a);
  if (t) selfCheck(ctx, *t, a);
  return t;
}

}  // namespace

namespace detail {

template <ScalarField S>
std::size_t MetaImpl<S>::mu(const Term<S>& t) {
  auto m = [](const Term<S>& c) { return MetaImpl<S>::mu(c); };
  switch (t.kind()) {
    case TermKind::Var: return 0;
    case TermKind::Star: return 1;
    case TermKind::Sum:
    case TermKind::Pair:
    case TermKind::SupPair: return 1 + std::max(m(t.child(0)), m(t.child(1)));
    case TermKind::Scal:
    case TermKind::DBot:
    case TermKind::Lam:
    case TermKind::Inl:
    case TermKind::Inr: return 1 + m(t.child(0));
    case TermKind::DTop:
    case TermKind::App:
    case TermKind::DAnd1:
    case TermKind::DAnd2:
    case TermKind::DSup1:
    case TermKind::DSup2:
    case TermKind::Tensor: return 1 + m(t.child(0)) + m(t.child(1));
    case TermKind::DOr:
    case TermKind::DSup: return 1 + m(t.child(0)) + std::max(m(t.child(1)), m(t.child(2)));
  }
  return 0;
}

namespace {

// Empty when the side terms of elimination node e satisfy the context
// grammar, otherwise a reason.
template <ScalarField S>
std::optional<std::string> sideConditions(const Term<S>& e) {
  for (std::size_t i = 1; i < e.arity(); ++i) {
    const Term<S>& c = e.child(i);
    int slot = e.binderSlot(i);
    for (const std::string& v : c.freeVars()) {
      if (slot < 0 || v != e.binderOf(i)) {
        return std::string(kindName(e.kind())) + " argument " + std::to_string(i) + " has free variable " + v;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

template <ScalarField S>
ElimContext<S> MetaImpl<S>::validate(const Term<S>& k) {
  const Term<S>* cur = &k;
  std::size_t depth = 0;
  while (!cur->is(TermKind::Var)) {
    if (!isElimination(cur->kind())) {
      throw std::invalid_argument(std::string(kindName(cur->kind())) + " is not an elimination");
    }
    if (auto why = sideConditions(*cur)) throw std::invalid_argument(*why);
    cur = &cur->child(0);
    ++depth;
  }
  if (cur->name() != kHole) throw std::invalid_argument("context must bottom out in the hole _");
  return ElimContext<S>(k, depth);
}

template <ScalarField S>
std::pair<ElimContext<S>, Term<S>> MetaImpl<S>::decompose(const Term<S>& t) {
  if (t.freeVars().size() != 1) throw std::domain_error("decomposition needs exactly one free variable");
  if (!isNormal(t)) throw std::domain_error("decomposition needs an irreducible term");
  const Term<S>* cur = &t;
  Path p;
  while (isElimination(cur->kind())) {
    if (auto why = sideConditions(*cur)) throw std::domain_error(*why);
    cur = &cur->child(0);
    p.push_back(0);
  }
  TermKind k = cur->kind();
  if (k != TermKind::Var && !isIntroduction(k) && k != TermKind::Sum && k != TermKind::Scal) {
    throw std::domain_error(std::string(kindName(k)) + " in head position");
  }
  Term<S> head = *cur;
  Term<S> hole = t.replacedAt(p, Term<S>::var(std::string(kHole)));
  return {validate(hole), head};
}

template <ScalarField S>
Term<S> MetaImpl<S>::generateIn(const GenConfig& cfg, Rng& rng, const Context& ctx, const Proposition& a) {
  cfg.validate();
  for (int i = 0; i < cfg.retries; ++i) {
    if (auto t = attemptIn<S>(cfg, rng, ctx, a)) return *t;
  }
  throw GenerationExhausted("no proof of " + toString(a) + " in " + toString(ctx) + " found after " +
                            std::to_string(cfg.retries) + " attempts");
}

template <ScalarField S>
Generated<S> MetaImpl<S>::generateTyped(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  Generator<S> names(cfg, rng, {});
  for (int i = 0; i < cfg.retries; ++i) {
    Context ctx;
    if (uniform(rng) < 0.3) {
      std::size_t k = 1 + rng.below(2);
      for (std::size_t j = 0; j < k; ++j) ctx = ctx.extended("h" + std::to_string(j), names.prop());
    }
    Proposition a = names.inhabitedProp();
    if (auto t = attemptIn<S>(cfg, rng, ctx, a)) return {ctx, *t, a};
  }
  throw GenerationExhausted("no typed term found after " + std::to_string(cfg.retries) + " attempts");
}

template <ScalarField S>
ElimContext<S> MetaImpl<S>::generateElimContext(const GenConfig& cfg, Rng& rng, const Proposition& hole,
                                                Proposition* result) {
  using T = Term<S>;
  cfg.validate();
  Generator<S> g(cfg, rng, {});
  T k = T::var(std::string(kHole));
  Proposition cur = hole;
  std::size_t layers = 1 + rng.below(3);
  int fresh = 0;
  auto var = [&] { return "y" + std::to_string(fresh++); };
  auto closed = [&](const Proposition& p) { return attemptIn<S>(cfg, rng, Context{}, p); };
  auto branch = [&](const std::string& y, const Proposition& p, const Proposition& target) {
    return attemptIn<S>(cfg, rng, Context{{y, p}}, target);
  };
  for (std::size_t i = 0; i < layers; ++i) {
    Proposition target = g.inhabitedProp();
    std::optional<T> next;
    switch (cur.kind()) {
      case PropKind::Top:
        if (auto u = closed(target)) next = T::dtop(k, *u);
        break;
      case PropKind::Bot: next = T::dbot(target, k); break;
      case PropKind::Imp:
        if (auto u = closed(cur.left())) {
          next = T::app(k, *u);
          target = cur.right();
        }
        break;
      case PropKind::And:
      case PropKind::Sup: {
        bool first = coin(rng);
        std::string y = var();
        if (auto r = branch(y, first ? cur.left() : cur.right(), target)) {
          bool sup = cur.kind() == PropKind::Sup;
          next = sup ? (first ? T::dsup1(k, y, *r) : T::dsup2(k, y, *r))
                     : (first ? T::dand1(k, y, *r) : T::dand2(k, y, *r));
        }
        break;
      }
      case PropKind::Or: {
        std::string y = var();
        std::string z = var();
        auto r = branch(y, cur.left(), target);
        auto s = r ? branch(z, cur.right(), target) : std::nullopt;
        if (r && s) next = T::dor(k, y, *r, z, *s);
        break;
      }
    }
    if (!next) break;
    k = *next;
    cur = target;
  }
  if (result) *result = cur;
  return validate(k);
}

template struct MetaImpl<Rational>;
template struct MetaImpl<GaussianRational>;

}  // namespace detail

// --------------------------------------------------------------- shrinker --

template <ScalarField S>
Term<S> shrink(const Context& ctx, const Term<S>& t, const std::function<bool(const Term<S>&)>& fails,
               std::size_t maxRounds) {
  using T = Term<S>;
  Proposition type = synthesize(ctx, t).type;
  auto typed = [&](const T& c) {
    try {
      return synthesize(ctx, c).type == type && derivableIn(ctx, c);
    } catch (const TypeError&) {
      return false;
    }
  };
  auto stillFails = [&](const T& c) {
    try {
      return fails(c);
    } catch (...) {
      return true;
    }
  };
  T best = t;
  for (std::size_t round = 0; round < maxRounds; ++round) {
    std::vector<Path> paths;
    Path p;
    std::function<void(const T&)> walk = [&](const T& s) {
      paths.push_back(p);
      for (std::size_t i = 0; i < s.arity(); ++i) {
        p.push_back(i);
        walk(s.child(i));
        p.pop_back();
      }
    };
    walk(best);
    bool improved = false;
    for (const Path& at : paths) {
      const T& sub = best.at(at);
      std::vector<T> cands;
      for (const T& c : sub.children()) cands.push_back(c);
      if (auto s = contractRoot(sub)) cands.push_back(s->after);
      if (sub.isClosed() && !(sub.is(TermKind::Star) && sub.scalar() == S::one())) {
        try {
          if (typeOf(sub) == Proposition::top()) cands.push_back(T::star(S::one()));
        } catch (const TypeError&) {
        }
      }
      for (const T& c : cands) {
        T next = best.replacedAt(at, c);
        if (next.size() > best.size() || (next.size() == best.size() && c.is(sub.kind()))) continue;
        if (alphaEq(next, best) || !typed(next) || !stillFails(next)) continue;
        best = next;
        improved = true;
        break;
      }
      if (improved) break;
    }
    if (!improved) break;
  }
  return best;
}

template Term<Rational> shrink<Rational>(const Context&, const Term<Rational>&,
                                         const std::function<bool(const Term<Rational>&)>&, std::size_t);
template Term<GaussianRational> shrink<GaussianRational>(const Context&, const Term<GaussianRational>&,
                                                         const std::function<bool(const Term<GaussianRational>&)>&,
                                                         std::size_t);

// ----------------------------------------------------------------- suites --

namespace {

// A failing property: message on failure, nullopt on success.
template <ScalarField S>
using Property = std::function<std::optional<std::string>(const Term<S>&)>;

template <ScalarField S>
struct Case {
  Context ctx;
  Term<S> term;
  Property<S> property;
};

template <ScalarField S>
std::optional<std::string> guarded(const Property<S>& prop, const Term<S>& t) {
  try {
    return prop(t);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

// Both outcomes of every δ⊙([u1, u2], x.v, y.w) position with closed
// components, fired by substitution.
template <ScalarField S>
std::vector<Term<S>> measurementSteps(const Term<S>& t) {
  std::vector<Term<S>> out;
  Path p;
  std::function<void(const Term<S>&)> walk = [&](const Term<S>& s) {
    if (s.is(TermKind::DSup) && s.child(0).is(TermKind::SupPair) && s.child(0).isClosed()) {
      const Term<S>& pair = s.child(0);
      out.push_back(t.replacedAt(p, substitute(s.child(1), std::string(s.binderOf(1)), pair.child(0))));
      out.push_back(t.replacedAt(p, substitute(s.child(2), std::string(s.binderOf(2)), pair.child(1))));
    }
    for (std::size_t i = 0; i < s.arity(); ++i) {
      p.push_back(i);
      walk(s.child(i));
      p.pop_back();
    }
  };
  walk(t);
  return out;
}

template <ScalarField S>
std::vector<Term<S>> oneStepReducts(const Term<S>& t) {
  std::vector<Term<S>> out;
  for (const Path& p : redexPaths(t)) out.push_back(*stepAt(t, p));
  for (Term<S>& m : measurementSteps(t)) out.push_back(std::move(m));
  return out;
}

std::string fmt(const std::set<std::string>& s) {
  std::string out = "{";
  for (const std::string& x : s) out += (out.size() > 1 ? ", " : "") + x;
  return out + "}";
}

// A random vector shape with at most 4 leaves.
VShape randomShape(Rng& rng, Flavor f, int budget) {
  if (budget <= 1 || rng.below(3) == 0) return VShape::top(f);
  int l = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(budget - 1)));
  VShape a = randomShape(rng, f, l);
  VShape b = randomShape(rng, f, budget - l);
  Proposition p = f == Flavor::And ? Proposition::conj(a.prop(), b.prop()) : Proposition::sup(a.prop(), b.prop());
  return VShape::of(p, f);
}

template <ScalarField S>
Case<S> makeCase(std::string_view name, GenConfig cfg, Rng& rng, const SuiteOptions& opts) {
  using T = Term<S>;
  RewriteOptions ro;
  Generator<S> g(cfg, rng, {});

  auto closedOf = [&](const Proposition& a) { return generateClosed<S>(cfg, rng, a); };

  if (name == "subject-reduction") {
    Generated<S> gt = generateTyped<S>(cfg, rng);
    Context ctx = gt.context;
    Proposition a = gt.type;
    return {ctx, gt.term, [ctx, a](const T& t) -> std::optional<std::string> {
              Synthesis before = synthesize(ctx, t);
              Derivation<S> d = derive(ctx, t);
              if (auto bad = verifyDerivation(d)) return "derivation rejected: " + *bad;
              for (const T& u : oneStepReducts(t)) {
                Synthesis after;
                try {
                  after = synthesize(ctx, u);
                } catch (const TypeError& e) {
                  return "reduct " + printTerm(u) + " is ill-typed: " + e.what();
                }
                if (after.type != a) return "reduct " + printTerm(u) + " has type " + toString(after.type);
                if (!std::includes(before.usage.used.begin(), before.usage.used.end(), after.usage.used.begin(),
                                   after.usage.used.end())) {
                  return "reduct uses " + fmt(after.usage.used) + ", original " + fmt(before.usage.used);
                }
                if (!derivableIn(ctx, u)) return "reduct " + printTerm(u) + " is not derivable in " + toString(ctx);
              }
              return std::nullopt;
            }};
  }
  if (name == "confluence") {
    Proposition a = g.inhabitedProp();
    T t = closedOf(a);
    std::uint64_t orderSeed = rng.next();
    int orders = opts.orders;
    return {Context{}, t, [orderSeed, orders, ro](const T& t) -> std::optional<std::string> {
              T nf = normalize(t, ro);
              Rng r(orderSeed);
              for (int k = 0; k < orders; ++k) {
                T other = normalizeRandomOrder(t, r, ro);
                if (!alphaEq(other, nf)) {
                  return "orders disagree: " + printTerm(nf) + " vs " + printTerm(other);
                }
              }
              return std::nullopt;
            }};
  }
  if (name == "termination") {
    Generated<S> gt = generateTyped<S>(cfg, rng);
    std::uint64_t sampleSeed = rng.next();
    return {gt.context, gt.term, [sampleSeed, ro](const T& t) -> std::optional<std::string> {
              Rng r(sampleSeed);
              auto [nf, trace] = sampleNormalize<S>(t, r, halfWeigher<S>, ro);
              if (!isNormal(nf)) return "result " + printTerm(nf) + " is not normal";
              if (auto bad = replay(trace)) return "trace step " + std::to_string(*bad) + " does not replay";
              return std::nullopt;
            }};
  }
  if (name == "mu-subst") {
    Proposition b = g.inhabitedProp();
    Proposition a = g.inhabitedProp();
    std::string x = "v";
    Context ctx{{x, b}};
    T t = generateInContext<S>(cfg, rng, ctx, a);
    T u = closedOf(b);
    return {ctx, t, [x, u](const T& t) -> std::optional<std::string> {
              T r = substitute(t, x, u);
              std::size_t lhs = mu(r), rhs = mu(t) + mu(u);
              if (lhs > rhs) {
                return "mu(t[u/x]) = " + std::to_string(lhs) + " > " + std::to_string(rhs) + " with u = " + printTerm(u);
              }
              return std::nullopt;
            }};
  }
  if (name == "mu-red") {
    Generated<S> gt = generateTyped<S>(cfg, rng);
    return {gt.context, gt.term, [](const T& t) -> std::optional<std::string> {
              std::size_t m = mu(t);
              for (const T& u : oneStepReducts(t)) {
                if (mu(u) > m) return "step to " + printTerm(u) + " raises mu from " + std::to_string(m) + " to " +
                                      std::to_string(mu(u));
              }
              return std::nullopt;
            }};
  }
  if (name == "vecspace") {
    Flavor f = coin(rng) ? Flavor::And : Flavor::Sup;
    VShape a = randomShape(rng, f, 4);
    T t2 = closedOf(a.prop());
    T t3 = closedOf(a.prop());
    S x = g.scalar();
    S y = g.scalar();
    T t1 = closedOf(a.prop());
    return {Context{}, t1, [a, t2, t3, x, y, ro](const T& t1) -> std::optional<std::string> {
              return vectorSpaceViolation(a, t1, t2, t3, x, y, ro);
            }};
  }
  if (name == "linearity") {
    Flavor fl = coin(rng) ? Flavor::And : Flavor::Sup;
    VShape b = randomShape(rng, fl, 4);
    Proposition a = g.inhabitedProp();
    while (!discardable(a)) a = g.inhabitedProp();
    T f = closedOf(Proposition::imp(a, b.prop()));
    struct Triple {
      T u, v;
      S s;
    };
    std::vector<Triple> triples;
    for (int i = 0; i < opts.triples; ++i) triples.push_back({closedOf(a), closedOf(a), g.scalar()});
    return {Context{}, f, [triples, ro](const T& f) -> std::optional<std::string> {
              for (const Triple& tr : triples) {
                if (!convertible(T::app(f, T::sum(tr.u, tr.v)), T::sum(T::app(f, tr.u), T::app(f, tr.v)), ro)) {
                  return "f(u + v) differs from f u + f v for u = " + printTerm(tr.u) + ", v = " + printTerm(tr.v);
                }
                if (!convertible(T::app(f, T::scal(tr.s, tr.u)), T::scal(tr.s, T::app(f, tr.u)), ro)) {
                  return "f(a.u) differs from a.(f u) for a = " + tr.s.toString() + ", u = " + printTerm(tr.u);
                }
              }
              return std::nullopt;
            }};
  }
  if (name == "introduction") {
    Proposition a = g.inhabitedProp();
    T t = closedOf(a);
    return {Context{}, t, [ro](const T& t) -> std::optional<std::string> {
              Proposition a = typeOf(t);
              T nf = normalize(t, ro);
              TermKind k = nf.kind();
              bool ok = false;
              switch (a.kind()) {
                case PropKind::Top: ok = k == TermKind::Star; break;
                case PropKind::Bot: ok = false; break;
                case PropKind::Imp: ok = k == TermKind::Lam; break;
                case PropKind::And: ok = k == TermKind::Pair; break;
                case PropKind::Or:
                  ok = k == TermKind::Inl || k == TermKind::Inr || k == TermKind::Sum || k == TermKind::Scal;
                  break;
                case PropKind::Sup: ok = k == TermKind::SupPair; break;
              }
              if (!ok) return "normal form " + printTerm(nf) + " of " + toString(a) + " is not an introduction";
              return std::nullopt;
            }};
  }
  throw std::invalid_argument("unknown suite " + std::string(name));
}

constexpr int kCaseAttempts = 20;

GenConfig defaultConfig(std::string_view name) {
  GenConfig cfg;
  cfg.maxDepth = 5;
  cfg.retries = 50;
  cfg.rules.tensor = 0.5;
  if (name == "subject-reduction" || name == "mu-red" || name == "termination") cfg.rules.dsup = 0.5;
  return cfg;
}

bool deterministicOnly(std::string_view name) {
  return name == "confluence" || name == "vecspace" || name == "linearity" || name == "introduction";
}

}  // namespace

template <ScalarField S>
std::optional<std::string> vectorSpaceViolation(const VShape& a, const Term<S>& t1, const Term<S>& t2,
                                                const Term<S>& t3, const S& x, const S& y,
                                                const RewriteOptions& ro) {
  using T = Term<S>;
  T zero = zeroProof<S>(a);
  auto eq = [&](const T& l, const T& r) { return convertible(l, r, ro); };
  if (!eq(T::sum(T::sum(t1, t2), t3), T::sum(t1, T::sum(t2, t3)))) return "associativity";
  if (!eq(T::sum(t1, t2), T::sum(t2, t1))) return "commutativity";
  if (!eq(T::sum(t1, zero), t1)) return "zero is neutral";
  if (!eq(T::sum(t1, negProof(a, t1, ro)), zero)) return "additive inverse";
  if (!eq(T::scal(x, T::scal(y, t1)), T::scal(x * y, t1))) return "scalar associativity";
  if (!eq(T::scal(S::one(), t1), t1)) return "unit scalar";
  if (!eq(T::scal(x, T::sum(t1, t2)), T::sum(T::scal(x, t1), T::scal(x, t2)))) return "distributivity over vectors";
  if (!eq(T::scal(x + y, t1), T::sum(T::scal(x, t1), T::scal(y, t1)))) return "distributivity over scalars";
  return std::nullopt;
}

template std::optional<std::string> vectorSpaceViolation<Rational>(const VShape&, const Term<Rational>&,
                                                                   const Term<Rational>&, const Term<Rational>&,
                                                                   const Rational&, const Rational&,
                                                                   const RewriteOptions&);
template std::optional<std::string> vectorSpaceViolation<GaussianRational>(
    const VShape&, const Term<GaussianRational>&, const Term<GaussianRational>&, const Term<GaussianRational>&,
    const GaussianRational&, const GaussianRational&, const RewriteOptions&);

template <ScalarField S>
SuiteReport runSuite(std::string_view name, const SuiteOptions& opts) {
  const auto& names = suiteNames();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown suite " + std::string(name));
  }
  GenConfig cfg = opts.config.value_or(defaultConfig(name));
  // The properties below are stated for terms without measurement.
  if (deterministicOnly(name)) cfg.rules.dsup = 0;
  cfg.validate();

  SuiteReport report{std::string(name), std::vector<CaseResult>(opts.n)};
  auto runOne = [&](std::size_t i) {
    CaseResult& out = report.cases[i];
    out.index = i;
    out.seed = Rng::derive(opts.seed, i);
    Rng rng(out.seed);
    std::optional<Case<S>> c;
    // An empty target type only means a fresh draw, not a failure.
    for (int attempt = 0; !c; ++attempt) {
      try {
        c = makeCase<S>(name, cfg, rng, opts);
      } catch (const GenerationExhausted& e) {
        if (attempt + 1 < kCaseAttempts) continue;
        out.passed = false;
        out.detail = std::string("generation failed: ") + e.what();
        return;
      } catch (const std::exception& e) {
        out.passed = false;
        out.detail = std::string("generation failed: ") + e.what();
        return;
      }
    }
    auto verdict = guarded<S>(c->property, c->term);
    if (!verdict) return;
    out.passed = false;
    out.detail = *verdict;
    Property<S> prop = c->property;
    Term<S> small = shrink<S>(c->ctx, c->term, [&](const Term<S>& t) { return guarded<S>(prop, t).has_value(); });
    out.term = printTerm(small);
    if (auto again = guarded<S>(prop, small)) out.detail = *again;
  };
  unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < opts.n; ++i) runOne(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < opts.n; i += threads) runOne(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return report;
}

template SuiteReport runSuite<Rational>(std::string_view, const SuiteOptions&);
template SuiteReport runSuite<GaussianRational>(std::string_view, const SuiteOptions&);

}  // namespace lsodot
