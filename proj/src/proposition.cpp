#include "lsodot/proposition.hpp"

#include <stdexcept>

namespace lsodot {

namespace {

int precedence(PropKind k) {
  switch (k) {
    case PropKind::Imp:
      return 1;
    case PropKind::And:
    case PropKind::Or:
    case PropKind::Sup:
      return 2;
    default:
      return 3;
  }
}

const char* opText(PropKind k) {
  switch (k) {
    case PropKind::Imp:
      return " -> ";
    case PropKind::And:
      return " & ";
    case PropKind::Or:
      return " | ";
    case PropKind::Sup:
      return " @ ";
    default:
      return "";
  }
}

void print(const Proposition& p, std::string& out) {
  switch (p.kind()) {
    case PropKind::Top:
      out += "unit";
      return;
    case PropKind::Bot:
      out += "void";
      return;
    default:
      break;
  }
  int prec = precedence(p.kind());
  // -> is right-associative; &, | and @ share one left-associative level.
  bool wrapLeft = prec == 1 ? precedence(p.left().kind()) <= 1 : precedence(p.left().kind()) < 2;
  bool wrapRight = prec == 2 && precedence(p.right().kind()) <= 2;
  if (wrapLeft) out += '(';
  print(p.left(), out);
  if (wrapLeft) out += ')';
  out += opText(p.kind());
  if (wrapRight) out += '(';
  print(p.right(), out);
  if (wrapRight) out += ')';
}

}  // namespace

Proposition::Proposition() : Proposition(top()) {}

Proposition Proposition::top() {
  static const Proposition t(std::make_shared<const Node>(Node{PropKind::Top, {}, 1}));
  return t;
}

Proposition Proposition::bot() {
  static const Proposition b(std::make_shared<const Node>(Node{PropKind::Bot, {}, 1}));
  return b;
}

Proposition Proposition::binary(PropKind kind, Proposition a, Proposition b) {
  if (kind == PropKind::Top || kind == PropKind::Bot) throw std::invalid_argument("not a binary connective");
  std::size_t size = 1 + a.size() + b.size();
  return Proposition(std::make_shared<const Node>(Node{kind, {std::move(a), std::move(b)}, size}));
}

Proposition Proposition::imp(Proposition a, Proposition b) { return binary(PropKind::Imp, std::move(a), std::move(b)); }
Proposition Proposition::conj(Proposition a, Proposition b) { return binary(PropKind::And, std::move(a), std::move(b)); }
Proposition Proposition::disj(Proposition a, Proposition b) { return binary(PropKind::Or, std::move(a), std::move(b)); }
Proposition Proposition::sup(Proposition a, Proposition b) { return binary(PropKind::Sup, std::move(a), std::move(b)); }

const Proposition& Proposition::left() const {
  if (!isBinary()) throw std::logic_error("left() of a constant proposition");
  return node_->kids[0];
}

const Proposition& Proposition::right() const {
  if (!isBinary()) throw std::logic_error("right() of a constant proposition");
  return node_->kids[1];
}

bool operator==(const Proposition& a, const Proposition& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  if (!a.isBinary()) return true;
  return a.left() == b.left() && a.right() == b.right();
}

bool operator<(const Proposition& a, const Proposition& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (!a.isBinary()) return false;
  if (a.left() != b.left()) return a.left() < b.left();
  return a.right() < b.right();
}

std::string toString(const Proposition& p) {
  std::string out;
  print(p, out);
  return out;
}

bool isSupShape(const Proposition& p) {
  if (p.kind() == PropKind::Top) return true;
  return p.kind() == PropKind::Sup && isSupShape(p.left()) && isSupShape(p.right());
}

Context::Context(std::initializer_list<Map::value_type> entries) {
  for (const auto& [name, prop] : entries) {
    if (!entries_.emplace(name, prop).second) throw std::invalid_argument("duplicate variable '" + name + "' in context");
  }
}

std::optional<Proposition> Context::lookup(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Context Context::extended(const std::string& name, const Proposition& p) const {
  Context c = *this;
  c.entries_.insert_or_assign(name, p);
  return c;
}

Context Context::without(std::string_view name) const {
  Context c = *this;
  if (auto it = c.entries_.find(name); it != c.entries_.end()) c.entries_.erase(it);
  return c;
}

Context Context::restricted(const std::set<std::string>& names) const {
  Context c;
  for (const auto& [name, prop] : entries_) {
    if (names.count(name)) c.entries_.emplace(name, prop);
  }
  return c;
}

std::set<std::string> Context::names() const {
  std::set<std::string> out;
  for (const auto& entry : entries_) out.insert(entry.first);
  return out;
}

std::string toString(const Context& ctx) {
  std::string out;
  for (const auto& [name, prop] : ctx) {
    if (!out.empty()) out += ", ";
    out += name + ":" + toString(prop);
  }
  return out;
}

}  // namespace lsodot
