#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lsodot {

enum class PropKind : std::uint8_t { Top, Bot, Imp, And, Or, Sup };

/// Immutable proposition tree: ⊤, ⊥, ⇒, ∧, ∨ and ⊙.
class Proposition {
 public:
  /// Default-constructs ⊤.
  Proposition();

  static Proposition top();
  static Proposition bot();
  static Proposition imp(Proposition a, Proposition b);
  static Proposition conj(Proposition a, Proposition b);
  static Proposition disj(Proposition a, Proposition b);
  static Proposition sup(Proposition a, Proposition b);
  static Proposition binary(PropKind kind, Proposition a, Proposition b);

  PropKind kind() const { return node_->kind; }
  bool isBinary() const { return kind() != PropKind::Top && kind() != PropKind::Bot; }
  const Proposition& left() const;
  const Proposition& right() const;

  /// Number of connective and constant occurrences.
  std::size_t size() const { return node_->size; }

  friend bool operator==(const Proposition& a, const Proposition& b);
  friend bool operator!=(const Proposition& a, const Proposition& b) { return !(a == b); }
  friend bool operator<(const Proposition& a, const Proposition& b);

 private:
  struct Node {
    PropKind kind;
    std::vector<Proposition> kids;
    std::size_t size;
  };
  explicit Proposition(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// ASCII surface form: unit, void, ->, &, |, @.
std::string toString(const Proposition& p);

/// True iff p is built from ⊤ and ⊙ only.
bool isSupShape(const Proposition& p);

/// Finite map from variable names to propositions. Insertion order is
/// irrelevant; iteration is by name so output is deterministic.
class Context {
 public:
  using Map = std::map<std::string, Proposition, std::less<>>;

  Context() = default;
  Context(std::initializer_list<Map::value_type> entries);

  bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }
  std::optional<Proposition> lookup(std::string_view name) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Returns a copy with name bound to p, replacing any earlier binding.
  Context extended(const std::string& name, const Proposition& p) const;
  Context without(std::string_view name) const;
  Context restricted(const std::set<std::string>& names) const;
  std::set<std::string> names() const;

  const Map& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Context& a, const Context& b) { return a.entries_ == b.entries_; }

 private:
  Map entries_;
};

std::string toString(const Context& ctx);

}  // namespace lsodot
