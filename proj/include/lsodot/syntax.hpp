#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lsodot/linalg.hpp"
#include "lsodot/proposition.hpp"
#include "lsodot/term.hpp"

namespace lsodot {

class ParseError : public std::runtime_error {
 public:
  /// code: unexpected-token, malformed-scalar, ragged-rows, empty-input.
  ParseError(std::string code, SourceSpan span, std::vector<std::string> expected, const std::string& message);

  const std::string& code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  /// Token spellings that would have been accepted at the error position.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::string code_;
  SourceSpan span_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  bool allowTensor = true;
};

Proposition parseProposition(std::string_view text);

namespace detail {

template <ScalarField S>
struct SyntaxImpl {
  static Term<S> parseTerm(std::string_view text, const ParseOptions& opts);
  static std::string printTerm(const Term<S>& t);
  static MatrixValue<S> parseMatrix(std::string_view text);
  static VectorValue<S> parseVector(std::string_view text);
};

extern template struct SyntaxImpl<Rational>;
extern template struct SyntaxImpl<GaussianRational>;

}  // namespace detail

/// Parses the ASCII term syntax, e.g. `\x:unit. dtop(x, {2}.*)`.
/// Every node carries the span it was parsed from.
template <ScalarField S>
Term<S> parseTerm(std::string_view text, const ParseOptions& opts = {}) {
  return detail::SyntaxImpl<S>::parseTerm(text, opts);
}

/// Inverse of parseTerm up to α-equivalence, with minimal parentheses.
template <ScalarField S>
std::string printTerm(const Term<S>& t) {
  return detail::SyntaxImpl<S>::printTerm(t);
}

/// Rows of whitespace-separated scalar literals, one row per line.
template <ScalarField S>
MatrixValue<S> parseMatrix(std::string_view text) {
  return detail::SyntaxImpl<S>::parseMatrix(text);
}

/// Whitespace-separated scalar literals (one per line by convention).
template <ScalarField S>
VectorValue<S> parseVector(std::string_view text) {
  return detail::SyntaxImpl<S>::parseVector(text);
}

template <ScalarField S>
std::string printVector(const VectorValue<S>& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += v(i).toString() + "\n";
  return out;
}

template <ScalarField S>
std::string printMatrix(const MatrixValue<S>& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += m(r, c).toString();
    }
    out += '\n';
  }
  return out;
}

}  // namespace lsodot
