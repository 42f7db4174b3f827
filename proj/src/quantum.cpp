#include "lsodot/quantum.hpp"

namespace lsodot {

VShape tensorShape(const VShape& a, const VShape& b) {
  if (a.flavor() != Flavor::Sup || b.flavor() != Flavor::Sup) throw ShapeError("tensor needs @-shaped operands");
  return VShape::of(tensorType(a.prop(), b.prop()), Flavor::Sup);
}

std::optional<DeutschOracle> parseOracle(std::string_view name) {
  if (name == "c0") return DeutschOracle::Const0;
  if (name == "c1") return DeutschOracle::Const1;
  if (name == "id") return DeutschOracle::Identity;
  if (name == "not") return DeutschOracle::Not;
  return std::nullopt;
}

int oracleValue(DeutschOracle o, int x) {
  switch (o) {
    case DeutschOracle::Const0: return 0;
    case DeutschOracle::Const1: return 1;
    case DeutschOracle::Identity: return x;
    case DeutschOracle::Not: return 1 - x;
  }
  return 0;
}

}  // namespace lsodot
