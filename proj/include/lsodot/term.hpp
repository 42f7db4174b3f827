#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lsodot/proposition.hpp"
#include "lsodot/scalar.hpp"

namespace lsodot {

struct SourceSpan {
  std::size_t start = 0;  // byte offset
  std::size_t end = 0;    // one past the last byte
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Child-index path from the root of a term; the empty path is the root.
using Path = std::vector<std::size_t>;

std::string toString(const Path& p);

enum class TermKind : std::uint8_t {
  Var,
  Sum,
  Scal,
  Star,
  DTop,
  DBot,
  Lam,
  App,
  Pair,
  DAnd1,
  DAnd2,
  Inl,
  Inr,
  DOr,
  SupPair,
  DSup1,
  DSup2,
  DSup,
  Tensor,
};

std::string_view kindName(TermKind k);

inline bool isElimination(TermKind k) {
  switch (k) {
    case TermKind::DTop:
    case TermKind::DBot:
    case TermKind::App:
    case TermKind::DAnd1:
    case TermKind::DAnd2:
    case TermKind::DOr:
    case TermKind::DSup1:
    case TermKind::DSup2:
    case TermKind::DSup:
      return true;
    default:
      return false;
  }
}

inline bool isIntroduction(TermKind k) {
  switch (k) {
    case TermKind::Star:
    case TermKind::Lam:
    case TermKind::Pair:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::SupPair:
      return true;
    default:
      return false;
  }
}

/// Immutable proof term over the scalar field S. Nodes are shared; copying a
/// Term is a reference-count bump. Free variables are cached per node.
///
/// Child layout: binary constructors store operands as children 0 and 1.
/// Lam's body is child 0, bound by binder 0. The one-branch eliminations
/// (DAnd1, DAnd2, DSup1, DSup2) keep the scrutinee at 0 and the continuation
/// at 1, bound by binder 0. DOr and DSup keep branches at 1 and 2, bound by
/// binders 0 and 1. Scalars live on Star and Scal; annotations live on Lam
/// (domain), DBot (result) and Inl/Inr (the absent disjunct).
template <ScalarField S>
class Term {
 public:
  static Term var(std::string name) {
    Node n(TermKind::Var);
    n.name = std::move(name);
    return make(std::move(n));
  }
  static Term sum(Term t, Term u) { return binary(TermKind::Sum, std::move(t), std::move(u)); }
  static Term scal(S a, Term t) {
    Node n(TermKind::Scal);
    n.scalar = std::move(a);
    n.kids = {std::move(t)};
    return make(std::move(n));
  }
  static Term star(S a) {
    Node n(TermKind::Star);
    n.scalar = std::move(a);
    return make(std::move(n));
  }
  static Term dtop(Term t, Term u) { return binary(TermKind::DTop, std::move(t), std::move(u)); }
  static Term dbot(Proposition result, Term t) {
    Node n(TermKind::DBot);
    n.annotation = std::move(result);
    n.kids = {std::move(t)};
    return make(std::move(n));
  }
  static Term lam(std::string x, Proposition domain, Term body) {
    Node n(TermKind::Lam);
    n.binders[0] = std::move(x);
    n.annotation = std::move(domain);
    n.kids = {std::move(body)};
    return make(std::move(n));
  }
  static Term app(Term t, Term u) { return binary(TermKind::App, std::move(t), std::move(u)); }
  static Term pair(Term t, Term u) { return binary(TermKind::Pair, std::move(t), std::move(u)); }
  static Term dand1(Term t, std::string x, Term u) { return oneBranch(TermKind::DAnd1, std::move(t), std::move(x), std::move(u)); }
  static Term dand2(Term t, std::string x, Term u) { return oneBranch(TermKind::DAnd2, std::move(t), std::move(x), std::move(u)); }
  /// inl(t) : A ∨ other.
  static Term inl(Proposition other, Term t) { return injection(TermKind::Inl, std::move(other), std::move(t)); }
  /// inr(t) : other ∨ B.
  static Term inr(Proposition other, Term t) { return injection(TermKind::Inr, std::move(other), std::move(t)); }
  static Term dor(Term t, std::string x, Term u, std::string y, Term v) {
    return twoBranch(TermKind::DOr, std::move(t), std::move(x), std::move(u), std::move(y), std::move(v));
  }
  static Term supPair(Term t, Term u) { return binary(TermKind::SupPair, std::move(t), std::move(u)); }
  static Term dsup1(Term t, std::string x, Term u) { return oneBranch(TermKind::DSup1, std::move(t), std::move(x), std::move(u)); }
  static Term dsup2(Term t, std::string x, Term u) { return oneBranch(TermKind::DSup2, std::move(t), std::move(x), std::move(u)); }
  static Term dsup(Term t, std::string x, Term u, std::string y, Term v) {
    return twoBranch(TermKind::DSup, std::move(t), std::move(x), std::move(u), std::move(y), std::move(v));
  }
  static Term tensor(Term t, Term u) { return binary(TermKind::Tensor, std::move(t), std::move(u)); }

  TermKind kind() const { return node_->kind; }
  bool is(TermKind k) const { return node_->kind == k; }

  /// Variable name; empty for non-variables.
  const std::string& name() const { return node_->name; }
  /// Scalar of a.⋆ or a•t; zero for every other constructor.
  const S& scalar() const {
    static const S zero{};
    return node_->scalar ? *node_->scalar : zero;
  }
  const Proposition& annotation() const { return node_->annotation; }

  std::size_t arity() const { return node_->kids.size(); }
  const Term& child(std::size_t i) const { return node_->kids.at(i); }
  const std::vector<Term>& children() const { return node_->kids; }

  /// Binder slot (0 or 1) that scopes over child i, or -1.
  int binderSlot(std::size_t i) const { return slotFor(kind(), i); }
  /// Name bound over child i; empty if the child is not under a binder.
  std::string_view binderOf(std::size_t i) const {
    int slot = binderSlot(i);
    return slot < 0 ? std::string_view{} : std::string_view{node_->binders[slot]};
  }
  const std::array<std::string, 2>& binders() const { return node_->binders; }

  /// Sorted, duplicate-free free variables.
  const std::vector<std::string>& freeVars() const { return node_->fv; }
  bool hasFree(std::string_view x) const { return std::binary_search(node_->fv.begin(), node_->fv.end(), x, std::less<>{}); }
  bool isClosed() const { return node_->fv.empty(); }

  /// Number of nodes.
  std::size_t size() const { return node_->size; }

  const std::optional<SourceSpan>& span() const { return node_->span; }
  Term withSpan(SourceSpan sp) const {
    Node n = copyNode();
    n.span = sp;
    return make(std::move(n));
  }

  /// Same constructor, scalar and annotation; new children and binder names.
  Term rebuilt(std::vector<Term> kids, std::array<std::string, 2> binders) const {
    Node n = copyNode();
    n.kids = std::move(kids);
    n.binders = std::move(binders);
    n.span.reset();
    return make(std::move(n));
  }
  Term rebuilt(std::vector<Term> kids) const { return rebuilt(std::move(kids), node_->binders); }
  Term withChild(std::size_t i, Term c) const {
    const Term& before = node_->kids.at(i);
    if (c.freeVars() != before.freeVars()) {
      std::vector<Term> kids = node_->kids;
      kids[i] = std::move(c);
      return rebuilt(std::move(kids));
    }
    // same free variables: the cached set carries over
    Node n = copyNode();
    n.size = n.size - before.size() + c.size();
    n.kids[i] = std::move(c);
    n.span.reset();
    return Term(std::make_shared<const Node>(std::move(n)));
  }
  Term withScalar(S a) const {
    Node n = copyNode();
    n.scalar = std::move(a);
    return make(std::move(n));
  }

  /// Subterm at a path; throws std::out_of_range on an invalid path.
  const Term& at(const Path& p) const {
    const Term* cur = this;
    for (std::size_t i : p) {
      if (i >= cur->arity()) throw std::out_of_range("invalid term path " + toString(p));
      cur = &cur->child(i);
    }
    return *cur;
  }
  /// Copy with the subterm at p replaced.
  Term replacedAt(const Path& p, Term replacement, std::size_t depth = 0) const {
    if (depth == p.size()) return replacement;
    if (p[depth] >= arity()) throw std::out_of_range("invalid term path " + toString(p));
    return withChild(p[depth], child(p[depth]).replacedAt(p, std::move(replacement), depth + 1));
  }

  /// Identity of the shared node; equal ids imply structurally equal terms.
  const void* id() const { return node_.get(); }

  /// Tri-state cache for the rewrite engine: 0 unknown, 1 normal, 2 reducible.
  std::uint8_t normalCache() const { return node_->normal.load(std::memory_order_relaxed); }
  void setNormalCache(std::uint8_t v) const { node_->normal.store(v, std::memory_order_relaxed); }

  /// Syntactic equality including bound names; see alphaEq for α-equivalence.
  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.size == y.size && x.name == y.name && x.binders == y.binders &&
           x.scalar == y.scalar && x.annotation == y.annotation && x.kids == y.kids;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    explicit Node(TermKind k) : kind(k) {}
    Node(const Node& o)
        : kind(o.kind), name(o.name), binders(o.binders), scalar(o.scalar), annotation(o.annotation), kids(o.kids),
          fv(o.fv), size(o.size), span(o.span) {}
    Node(Node&& o) noexcept
        : kind(o.kind), name(std::move(o.name)), binders(std::move(o.binders)), scalar(std::move(o.scalar)),
          annotation(std::move(o.annotation)), kids(std::move(o.kids)), fv(std::move(o.fv)), size(o.size),
          span(o.span) {}

    TermKind kind;
    std::string name;
    std::array<std::string, 2> binders;
    std::optional<S> scalar;  // only a.⋆ and a•t carry one
    Proposition annotation;
    std::vector<Term> kids;
    std::vector<std::string> fv;
    std::size_t size = 1;
    std::optional<SourceSpan> span;
    mutable std::atomic<std::uint8_t> normal{0};
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static int slotFor(TermKind k, std::size_t i) {
    switch (k) {
      case TermKind::Lam:
        return i == 0 ? 0 : -1;
      case TermKind::DAnd1:
      case TermKind::DAnd2:
      case TermKind::DSup1:
      case TermKind::DSup2:
        return i == 1 ? 0 : -1;
      case TermKind::DOr:
      case TermKind::DSup:
        return i == 1 ? 0 : (i == 2 ? 1 : -1);
      default:
        return -1;
    }
  }

  Node copyNode() const { return Node(*node_); }

  static Term make(Node n) {
    n.size = 1;
    n.fv.clear();
    if (n.kind == TermKind::Var) n.fv.push_back(n.name);
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      const Term& c = n.kids[i];
      n.size += c.size();
      int slot = slotFor(n.kind, i);
      for (const std::string& v : c.freeVars()) {
        if (slot >= 0 && v == n.binders[slot]) continue;
        n.fv.push_back(v);
      }
    }
    std::sort(n.fv.begin(), n.fv.end());
    n.fv.erase(std::unique(n.fv.begin(), n.fv.end()), n.fv.end());
    return Term(std::make_shared<const Node>(std::move(n)));
  }

  static Term binary(TermKind k, Term t, Term u) {
    Node n(k);
    n.kids = {std::move(t), std::move(u)};
    return make(std::move(n));
  }
  static Term oneBranch(TermKind k, Term t, std::string x, Term u) {
    Node n(k);
    n.binders[0] = std::move(x);
    n.kids = {std::move(t), std::move(u)};
    return make(std::move(n));
  }
  static Term twoBranch(TermKind k, Term t, std::string x, Term u, std::string y, Term v) {
    Node n(k);
    n.binders = {std::move(x), std::move(y)};
    n.kids = {std::move(t), std::move(u), std::move(v)};
    return make(std::move(n));
  }
  static Term injection(TermKind k, Proposition other, Term t) {
    Node n(k);
    n.annotation = std::move(other);
    n.kids = {std::move(t)};
    return make(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace lsodot
