#include "lsodot/vectors.hpp"

namespace lsodot {

namespace {

// Dimension of p if it is built from ⊤ and the connective k only.
std::optional<std::size_t> leafCount(const Proposition& p, PropKind k) {
  if (p.kind() == PropKind::Top) return 1;
  if (p.kind() != k) return std::nullopt;
  auto l = leafCount(p.left(), k);
  auto r = leafCount(p.right(), k);
  if (!l || !r) return std::nullopt;
  return *l + *r;
}

}  // namespace

std::optional<VShape> VShape::tryOf(const Proposition& p, std::optional<Flavor> flavor) {
  if (p.kind() == PropKind::Top) return VShape(p, flavor.value_or(Flavor::And), 1);
  Flavor f;
  if (p.kind() == PropKind::And) {
    f = Flavor::And;
  } else if (p.kind() == PropKind::Sup) {
    f = Flavor::Sup;
  } else {
    return std::nullopt;
  }
  if (flavor && *flavor != f) return std::nullopt;
  auto d = leafCount(p, f == Flavor::And ? PropKind::And : PropKind::Sup);
  if (!d) return std::nullopt;
  return VShape(p, f, *d);
}

VShape VShape::of(const Proposition& p, std::optional<Flavor> flavor) {
  auto s = tryOf(p, flavor);
  if (!s) {
    std::string want = !flavor ? "unit with only & or only @" : (*flavor == Flavor::And ? "unit and &" : "unit and @");
    throw ShapeError(toString(p) + " is not a vector proposition built from " + want);
  }
  return *s;
}

Proposition qubitProp(std::size_t n) {
  Proposition q = Proposition::top();
  for (std::size_t i = 0; i < n; ++i) q = Proposition::sup(q, q);
  return q;
}

VShape VShape::qubits(std::size_t n) { return VShape(qubitProp(n), Flavor::Sup, std::size_t{1} << n); }

VShape VShape::left() const {
  if (isTop()) throw ShapeError("unit has no components");
  return of(prop_.left(), flavor_);
}

VShape VShape::right() const {
  if (isTop()) throw ShapeError("unit has no components");
  return of(prop_.right(), flavor_);
}

}  // namespace lsodot
