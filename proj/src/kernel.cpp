#include <optional>

#include "lsodot/kernel.hpp"

namespace lsodot {

std::string toString(const Path& p) {
  if (p.empty()) return "e";
  std::string out;
  for (std::size_t i : p) {
    if (!out.empty()) out += '.';
    out += std::to_string(i);
  }
  return out;
}

std::string_view kindName(TermKind k) {
  switch (k) {
    case TermKind::Var: return "var";
    case TermKind::Sum: return "sum";
    case TermKind::Scal: return "scal";
    case TermKind::Star: return "star";
    case TermKind::DTop: return "dtop";
    case TermKind::DBot: return "dbot";
    case TermKind::Lam: return "lam";
    case TermKind::App: return "app";
    case TermKind::Pair: return "pair";
    case TermKind::DAnd1: return "dand1";
    case TermKind::DAnd2: return "dand2";
    case TermKind::Inl: return "inl";
    case TermKind::Inr: return "inr";
    case TermKind::DOr: return "dor";
    case TermKind::SupPair: return "sup";
    case TermKind::DSup1: return "dsup1";
    case TermKind::DSup2: return "dsup2";
    case TermKind::DSup: return "dsup";
    case TermKind::Tensor: return "tensor";
  }
  return "?";
}

std::string freshName(const std::string& base, const std::set<std::string, std::less<>>& avoid) {
  std::string name = base;
  while (avoid.count(name)) name += '\'';
  return name;
}

namespace detail {

namespace {

template <ScalarField S>
Term<S> subst(const Term<S>& t, const std::string& x, const Term<S>& u) {
  if (!t.hasFree(x)) return t;
  if (t.is(TermKind::Var)) return u;
  std::vector<Term<S>> kids = t.children();
  std::array<std::string, 2> binders = t.binders();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    int slot = t.binderSlot(i);
    if (slot < 0) {
      kids[i] = subst(kids[i], x, u);
      continue;
    }
    const std::string& b = binders[slot];
    if (b == x || !kids[i].hasFree(x)) continue;
    if (u.hasFree(b)) {
      std::set<std::string, std::less<>> avoid(u.freeVars().begin(), u.freeVars().end());
      avoid.insert(kids[i].freeVars().begin(), kids[i].freeVars().end());
      avoid.insert(x);
      std::string fresh = freshName(b, avoid);
      kids[i] = subst(kids[i], b, Term<S>::var(fresh));
      binders[slot] = fresh;
    }
    kids[i] = subst(kids[i], x, u);
  }
  return t.rebuilt(std::move(kids), std::move(binders));
}

// Distance to the innermost binder of `name`, or nullopt when free.
std::optional<std::size_t> boundIndex(const std::vector<std::string_view>& env, std::string_view name) {
  for (std::size_t k = env.size(); k-- > 0;) {
    if (env[k] == name) return env.size() - 1 - k;
  }
  return std::nullopt;
}

template <ScalarField S>
bool alpha(const Term<S>& a, const Term<S>& b, std::vector<std::string_view>& ea, std::vector<std::string_view>& eb) {
  if (a.id() == b.id() && a.isClosed()) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Var:
      return boundIndex(ea, a.name()) == boundIndex(eb, b.name()) &&
             (boundIndex(ea, a.name()) || a.name() == b.name());
    case TermKind::Star:
    case TermKind::Scal:
      if (a.scalar() != b.scalar()) return false;
      break;
    case TermKind::Lam:
    case TermKind::DBot:
    case TermKind::Inl:
    case TermKind::Inr:
      if (a.annotation() != b.annotation()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    std::string_view ba = a.binderOf(i);
    bool bound = !ba.empty();
    if (bound) {
      ea.push_back(ba);
      eb.push_back(b.binderOf(i));
    }
    bool same = alpha(a.child(i), b.child(i), ea, eb);
    if (bound) {
      ea.pop_back();
      eb.pop_back();
    }
    if (!same) return false;
  }
  return true;
}

template <ScalarField S>
void key(const Term<S>& t, std::vector<std::string_view>& env, std::string& out) {
  out += kindName(t.kind());
  switch (t.kind()) {
    case TermKind::Var:
      if (auto k = boundIndex(env, t.name())) {
        out += '#';
        out += std::to_string(*k);
      } else {
        out += '$';
        out += t.name();
      }
      return;
    case TermKind::Star:
    case TermKind::Scal:
      out += '{';
      out += t.scalar().toString();
      out += '}';
      break;
    case TermKind::Lam:
    case TermKind::DBot:
    case TermKind::Inl:
    case TermKind::Inr:
      out += '[';
      out += toString(t.annotation());
      out += ']';
      break;
    default:
      break;
  }
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    std::string_view b = t.binderOf(i);
    if (!b.empty()) {
      out += '.';
      env.push_back(b);
    }
    key(t.child(i), env, out);
    if (!b.empty()) env.pop_back();
  }
  out += ')';
}

}  // namespace

template <ScalarField S>
Term<S> KernelImpl<S>::substitute(const T& t, const std::string& x, const T& u) {
  return subst(t, x, u);
}

template <ScalarField S>
bool KernelImpl<S>::alphaEq(const T& a, const T& b) {
  std::vector<std::string_view> ea, eb;
  return alpha(a, b, ea, eb);
}

template <ScalarField S>
std::string KernelImpl<S>::canonicalKey(const T& t) {
  std::vector<std::string_view> env;
  std::string out;
  key(t, env, out);
  return out;
}

template struct KernelImpl<Rational>;
template struct KernelImpl<GaussianRational>;

}  // namespace detail

}  // namespace lsodot
