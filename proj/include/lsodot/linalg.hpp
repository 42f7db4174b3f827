#pragma once

#include <Eigen/Core>

#include "lsodot/scalar.hpp"

namespace Eigen {

// Exact scalars: no epsilon, heap-allocated storage, and conj() handled by the
// scalar itself, so Eigen treats both as real fields.
template <>
struct NumTraits<lsodot::Rational> : GenericNumTraits<lsodot::Rational> {
  using Real = lsodot::Rational;
  using NonInteger = lsodot::Rational;
  using Nested = lsodot::Rational;
  using Literal = lsodot::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 8,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<lsodot::GaussianRational> : GenericNumTraits<lsodot::GaussianRational> {
  using Real = lsodot::Rational;
  using NonInteger = lsodot::GaussianRational;
  using Nested = lsodot::GaussianRational;
  using Literal = lsodot::GaussianRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 16,
    MulCost = 32,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace lsodot {

template <class S>
using VectorValue = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
using MatrixValue = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace lsodot
