#include "lsodot/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace lsodot {

ParseError::ParseError(std::string code, SourceSpan span, std::vector<std::string> expected, const std::string& message)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
      code_(std::move(code)),
      span_(span),
      expected_(std::move(expected)) {}

namespace {

SourceSpan makeSpan(std::string_view text, std::size_t start, std::size_t end) {
  SourceSpan sp{start, end, 1, 1};
  for (std::size_t i = 0; i < start && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++sp.line;
      sp.column = 1;
    } else {
      ++sp.column;
    }
  }
  return sp;
}

enum class Tok {
  Ident,
  Scalar,
  Backslash,
  Colon,
  Dot,
  DotStar,
  Comma,
  LParen,
  RParen,
  Lt,
  Gt,
  LBrack,
  RBrack,
  Plus,
  Star,
  Arrow,
  Amp,
  Bar,
  At,
  Tensor,
  End,
};

const char* spelling(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Scalar: return "{scalar}";
    case Tok::Backslash: return "\\";
    case Tok::Colon: return ":";
    case Tok::Dot: return ".";
    case Tok::DotStar: return ".*";
    case Tok::Comma: return ",";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::Lt: return "<";
    case Tok::Gt: return ">";
    case Tok::LBrack: return "[";
    case Tok::RBrack: return "]";
    case Tok::Plus: return "+";
    case Tok::Star: return "*";
    case Tok::Arrow: return "->";
    case Tok::Amp: return "&";
    case Tok::Bar: return "|";
    case Tok::At: return "@";
    case Tok::Tensor: return "><";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t start;
  std::size_t end;
};

constexpr std::array<std::string_view, 12> kKeywords = {"unit", "void", "inl",   "inr",   "dtop",  "dbot",
                                                        "dand1", "dand2", "dor", "dsup1", "dsup2", "dsup"};

bool isKeyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  auto fail = [&](std::size_t at, const std::string& msg) {
    throw ParseError("unexpected-token", makeSpan(text, at, at + 1), {}, msg);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (identStart(c)) {
      while (i < text.size() && identChar(text[i])) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start, i});
      continue;
    }
    if (c == '{') {
      std::size_t close = text.find('}', i);
      if (close == std::string_view::npos) fail(i, "unterminated scalar literal");
      std::string_view body = text.substr(i + 1, close - i - 1);
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
      i = close + 1;
      out.push_back({Tok::Scalar, std::string(body), start, i});
      continue;
    }
    auto two = text.substr(i, 2);
    Tok k;
    std::size_t len = 1;
    if (two == ".*") {
      k = Tok::DotStar;
      len = 2;
    } else if (two == "->") {
      k = Tok::Arrow;
      len = 2;
    } else if (two == "><") {
      k = Tok::Tensor;
      len = 2;
    } else {
      switch (c) {
        case '\\': k = Tok::Backslash; break;
        case ':': k = Tok::Colon; break;
        case '.': k = Tok::Dot; break;
        case ',': k = Tok::Comma; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case '+': k = Tok::Plus; break;
        case '*': k = Tok::Star; break;
        case '&': k = Tok::Amp; break;
        case '|': k = Tok::Bar; break;
        case '@': k = Tok::At; break;
        default: {
          std::string shown = static_cast<unsigned char>(c) < 0x80 && std::isprint(static_cast<unsigned char>(c))
                                  ? std::string(1, c)
                                  : "byte 0x" + std::string(1, "0123456789abcdef"[(c >> 4) & 0xf]) +
                                        std::string(1, "0123456789abcdef"[c & 0xf]);
          fail(i, "unexpected character '" + shown + "'");
        }
      }
    }
    i += len;
    out.push_back({k, std::string(text.substr(start, len)), start, i});
  }
  out.push_back({Tok::End, "", text.size(), text.size()});
  return out;
}

class TokenStream {
 public:
  TokenStream(std::string_view text) : text_(text), toks_(lex(text)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool atKeyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  Token expect(Tok k) {
    if (!at(k)) fail({spelling(k)});
    return next();
  }
  void expectKeyword(std::string_view kw) {
    if (!atKeyword(kw)) fail({std::string(kw)});
    next();
  }
  std::string expectIdent() {
    if (!at(Tok::Ident) || isKeyword(peek().text)) fail({"identifier"});
    return next().text;
  }
  std::size_t lastEnd() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].end; }
  SourceSpan span(std::size_t start) const { return makeSpan(text_, start, std::max(start, lastEnd())); }
  SourceSpan tokenSpan(const Token& t) const { return makeSpan(text_, t.start, t.end); }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + found;
    throw ParseError("unexpected-token", tokenSpan(t), std::move(expected), msg);
  }

  // prop ::= level2 ("->" prop)?   level2 ::= patom (("&"|"|"|"@") patom)*
  Proposition prop() {
    Proposition lhs = propLevel2();
    if (at(Tok::Arrow)) {
      next();
      return Proposition::imp(std::move(lhs), prop());
    }
    return lhs;
  }

 private:
  Proposition propLevel2() {
    Proposition lhs = propAtom();
    while (true) {
      PropKind k;
      if (at(Tok::Amp)) {
        k = PropKind::And;
      } else if (at(Tok::Bar)) {
        k = PropKind::Or;
      } else if (at(Tok::At)) {
        k = PropKind::Sup;
      } else {
        return lhs;
      }
      next();
      lhs = Proposition::binary(k, std::move(lhs), propAtom());
    }
  }

  Proposition propAtom() {
    if (atKeyword("unit")) {
      next();
      return Proposition::top();
    }
    if (atKeyword("void")) {
      next();
      return Proposition::bot();
    }
    if (at(Tok::LParen)) {
      next();
      Proposition p = prop();
      expect(Tok::RParen);
      return p;
    }
    fail({"unit", "void", "("});
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <ScalarField S>
class TermParser {
 public:
  TermParser(std::string_view text, const ParseOptions& opts) : ts_(text), opts_(opts) {}

  Term<S> parseAll() {
    if (ts_.at(Tok::End)) throw ParseError("empty-input", ts_.tokenSpan(ts_.peek()), {"a term"}, "no term found");
    Term<S> t = term();
    if (!ts_.at(Tok::End)) {
      if (ts_.at(Tok::Tensor) && !opts_.allowTensor) {
        throw ParseError("unexpected-token", ts_.tokenSpan(ts_.peek()), {}, "tensor '><' is not enabled");
      }
      ts_.fail({"+", opts_.allowTensor ? "><" : "end of input", "end of input"});
    }
    return t;
  }

 private:
  Term<S> spanned(Term<S> t, std::size_t start) { return t.withSpan(ts_.span(start)); }

  Term<S> term() {
    if (ts_.at(Tok::Backslash)) return lambda();
    return sum();
  }

  Term<S> lambda() {
    std::size_t start = ts_.next().start;
    std::string x = ts_.expectIdent();
    ts_.expect(Tok::Colon);
    Proposition dom = ts_.prop();
    ts_.expect(Tok::Dot);
    Term<S> body = term();
    return spanned(Term<S>::lam(std::move(x), std::move(dom), std::move(body)), start);
  }

  Term<S> sum() {
    std::size_t start = ts_.peek().start;
    Term<S> lhs = tensor();
    while (ts_.at(Tok::Plus)) {
      ts_.next();
      Term<S> rhs = tensor();
      lhs = spanned(Term<S>::sum(std::move(lhs), std::move(rhs)), start);
    }
    return lhs;
  }

  Term<S> tensor() {
    std::size_t start = ts_.peek().start;
    Term<S> lhs = scalApp();
    while (opts_.allowTensor && ts_.at(Tok::Tensor)) {
      ts_.next();
      Term<S> rhs = scalApp();
      lhs = spanned(Term<S>::tensor(std::move(lhs), std::move(rhs)), start);
    }
    return lhs;
  }

  Term<S> scalApp() {
    if (ts_.at(Tok::Scalar) && ts_.peek(1).kind == Tok::Star) {
      Token tok = ts_.next();
      S a = scalar(tok);
      ts_.next();
      Term<S> body = scalApp();
      return spanned(Term<S>::scal(std::move(a), std::move(body)), tok.start);
    }
    return app();
  }

  bool startsAtom() const {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::Ident:
        return t.text != "unit" && t.text != "void";
      case Tok::Scalar:
        return ts_.peek(1).kind == Tok::DotStar;
      case Tok::Lt:
      case Tok::LBrack:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Term<S> app() {
    std::size_t start = ts_.peek().start;
    Term<S> head = atom();
    while (startsAtom()) {
      Term<S> arg = atom();
      head = spanned(Term<S>::app(std::move(head), std::move(arg)), start);
    }
    return head;
  }

  S scalar(const Token& tok) {
    try {
      return S::parse(tok.text);
    } catch (const std::invalid_argument& e) {
      throw ParseError("malformed-scalar", ts_.tokenSpan(tok), {}, "malformed scalar '" + tok.text + "'");
    }
  }

  Term<S> atom() {
    const Token& t = ts_.peek();
    std::size_t start = t.start;
    switch (t.kind) {
      case Tok::Scalar:
        if (ts_.peek(1).kind == Tok::DotStar) {
          Token tok = ts_.next();
          S a = scalar(tok);
          ts_.next();
          return spanned(Term<S>::star(std::move(a)), start);
        }
        break;
      case Tok::Lt: {
        ts_.next();
        Term<S> a = term();
        ts_.expect(Tok::Comma);
        Term<S> b = term();
        ts_.expect(Tok::Gt);
        return spanned(Term<S>::pair(std::move(a), std::move(b)), start);
      }
      case Tok::LBrack: {
        ts_.next();
        Term<S> a = term();
        ts_.expect(Tok::Comma);
        Term<S> b = term();
        ts_.expect(Tok::RBrack);
        return spanned(Term<S>::supPair(std::move(a), std::move(b)), start);
      }
      case Tok::LParen: {
        ts_.next();
        Term<S> a = term();
        ts_.expect(Tok::RParen);
        return a;
      }
      case Tok::Ident:
        if (!isKeyword(t.text)) {
          std::string name = ts_.next().text;
          return spanned(Term<S>::var(std::move(name)), start);
        }
        return keywordForm();
      default:
        break;
    }
    ts_.fail({"identifier", "{scalar}.*", "<", "[", "(", "\\", "inl", "inr", "dtop", "dbot", "dand1", "dand2", "dor",
              "dsup1", "dsup2", "dsup"});
  }

  Proposition bracketProp() {
    ts_.expect(Tok::LBrack);
    Proposition p = ts_.prop();
    ts_.expect(Tok::RBrack);
    return p;
  }

  Term<S> parenTerm() {
    ts_.expect(Tok::LParen);
    Term<S> t = term();
    ts_.expect(Tok::RParen);
    return t;
  }

  std::pair<std::string, Term<S>> branch() {
    std::string x = ts_.expectIdent();
    ts_.expect(Tok::Dot);
    return {std::move(x), term()};
  }

  Term<S> keywordForm() {
    Token kw = ts_.next();
    const std::string& k = kw.text;
    Term<S> out = Term<S>::star(S::zero());
    if (k == "inl" || k == "inr") {
      Proposition other = bracketProp();
      Term<S> body = parenTerm();
      out = k == "inl" ? Term<S>::inl(std::move(other), std::move(body)) : Term<S>::inr(std::move(other), std::move(body));
    } else if (k == "dbot") {
      Proposition result = bracketProp();
      out = Term<S>::dbot(std::move(result), parenTerm());
    } else if (k == "dtop") {
      ts_.expect(Tok::LParen);
      Term<S> a = term();
      ts_.expect(Tok::Comma);
      Term<S> b = term();
      ts_.expect(Tok::RParen);
      out = Term<S>::dtop(std::move(a), std::move(b));
    } else if (k == "dand1" || k == "dand2" || k == "dsup1" || k == "dsup2") {
      ts_.expect(Tok::LParen);
      Term<S> a = term();
      ts_.expect(Tok::Comma);
      auto [x, u] = branch();
      ts_.expect(Tok::RParen);
      if (k == "dand1") out = Term<S>::dand1(std::move(a), std::move(x), std::move(u));
      if (k == "dand2") out = Term<S>::dand2(std::move(a), std::move(x), std::move(u));
      if (k == "dsup1") out = Term<S>::dsup1(std::move(a), std::move(x), std::move(u));
      if (k == "dsup2") out = Term<S>::dsup2(std::move(a), std::move(x), std::move(u));
    } else if (k == "dor" || k == "dsup") {
      ts_.expect(Tok::LParen);
      Term<S> a = term();
      ts_.expect(Tok::Comma);
      auto [x, u] = branch();
      ts_.expect(Tok::Comma);
      auto [y, v] = branch();
      ts_.expect(Tok::RParen);
      out = k == "dor" ? Term<S>::dor(std::move(a), std::move(x), std::move(u), std::move(y), std::move(v))
                       : Term<S>::dsup(std::move(a), std::move(x), std::move(u), std::move(y), std::move(v));
    } else {
      throw ParseError("unexpected-token", ts_.tokenSpan(kw), {}, "'" + k + "' is a proposition, not a term");
    }
    return spanned(std::move(out), kw.start);
  }

  TokenStream ts_;
  ParseOptions opts_;
};

// Precedence levels for printing: 0 term (lambda allowed), 1 sum, 2 tensor,
// 3 scalar product, 4 application, 5 atom.
int level(TermKind k) {
  switch (k) {
    case TermKind::Lam: return 0;
    case TermKind::Sum: return 1;
    case TermKind::Tensor: return 2;
    case TermKind::Scal: return 3;
    case TermKind::App: return 4;
    default: return 5;
  }
}

template <ScalarField S>
void print(const Term<S>& t, int ctx, std::string& out) {
  bool paren = level(t.kind()) < ctx;
  if (paren) out += '(';
  auto branch = [&](std::size_t i) {
    out += t.binderOf(i);
    out += ". ";
    print(t.child(i), 0, out);
  };
  switch (t.kind()) {
    case TermKind::Var:
      out += t.name();
      break;
    case TermKind::Star:
      out += "{" + t.scalar().toString() + "}.*";
      break;
    case TermKind::Scal:
      out += "{" + t.scalar().toString() + "}*";
      print(t.child(0), 3, out);
      break;
    case TermKind::Sum:
      print(t.child(0), 1, out);
      out += " + ";
      print(t.child(1), 2, out);
      break;
    case TermKind::Tensor:
      print(t.child(0), 2, out);
      out += " >< ";
      print(t.child(1), 3, out);
      break;
    case TermKind::App:
      print(t.child(0), 4, out);
      out += ' ';
      print(t.child(1), 5, out);
      break;
    case TermKind::Lam:
      out += "\\" + t.binders()[0] + ":" + toString(t.annotation()) + ". ";
      print(t.child(0), 0, out);
      break;
    case TermKind::Pair:
    case TermKind::SupPair:
      out += t.is(TermKind::Pair) ? '<' : '[';
      print(t.child(0), 0, out);
      out += ", ";
      print(t.child(1), 0, out);
      out += t.is(TermKind::Pair) ? '>' : ']';
      break;
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::DBot:
      out += std::string(kindName(t.kind())) + "[" + toString(t.annotation()) + "](";
      print(t.child(0), 0, out);
      out += ')';
      break;
    case TermKind::DTop:
      out += "dtop(";
      print(t.child(0), 0, out);
      out += ", ";
      print(t.child(1), 0, out);
      out += ')';
      break;
    case TermKind::DAnd1:
    case TermKind::DAnd2:
    case TermKind::DSup1:
    case TermKind::DSup2:
      out += std::string(kindName(t.kind())) + "(";
      print(t.child(0), 0, out);
      out += ", ";
      branch(1);
      out += ')';
      break;
    case TermKind::DOr:
    case TermKind::DSup:
      out += std::string(kindName(t.kind())) + "(";
      print(t.child(0), 0, out);
      out += ", ";
      branch(1);
      out += ", ";
      branch(2);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

struct Line {
  std::string_view text;
  std::size_t offset;
};

std::vector<Line> splitLines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, start});
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

struct Word {
  std::string_view text;
  std::size_t offset;
};

std::vector<Word> splitWords(std::string_view line, std::size_t base) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > s) words.push_back({line.substr(s, i - s), base + s});
  }
  return words;
}

template <ScalarField S>
S scalarWord(std::string_view whole, const Word& w) {
  try {
    return S::parse(w.text);
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed-scalar", makeSpan(whole, w.offset, w.offset + w.text.size()), {},
                     "malformed scalar '" + std::string(w.text) + "'");
  }
}

}  // namespace

Proposition parseProposition(std::string_view text) {
  TokenStream ts(text);
  Proposition p = ts.prop();
  if (!ts.at(Tok::End)) ts.fail({"->", "&", "|", "@", "end of input"});
  return p;
}

namespace detail {

template <ScalarField S>
Term<S> SyntaxImpl<S>::parseTerm(std::string_view text, const ParseOptions& opts) {
  return TermParser<S>(text, opts).parseAll();
}

template <ScalarField S>
std::string SyntaxImpl<S>::printTerm(const Term<S>& t) {
  std::string out;
  print(t, 0, out);
  return out;
}

template <ScalarField S>
MatrixValue<S> SyntaxImpl<S>::parseMatrix(std::string_view text) {
  std::vector<std::vector<S>> rows;
  std::size_t width = 0;
  for (const Line& line : splitLines(text)) {
    std::vector<Word> words = splitWords(line.text, line.offset);
    if (words.empty()) continue;
    if (!rows.empty() && words.size() != width) {
      throw ParseError("ragged-rows", makeSpan(text, line.offset, line.offset + line.text.size()), {},
                       "row " + std::to_string(rows.size() + 1) + " has " + std::to_string(words.size()) +
                           " entries, expected " + std::to_string(width));
    }
    width = words.size();
    std::vector<S> row;
    for (const Word& w : words) row.push_back(scalarWord<S>(text, w));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty-input", makeSpan(text, 0, text.size()), {}, "matrix has no rows");
  MatrixValue<S> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

template <ScalarField S>
VectorValue<S> SyntaxImpl<S>::parseVector(std::string_view text) {
  std::vector<S> entries;
  for (const Word& w : splitWords(text, 0)) entries.push_back(scalarWord<S>(text, w));
  if (entries.empty()) throw ParseError("empty-input", makeSpan(text, 0, text.size()), {}, "vector has no entries");
  VectorValue<S> v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

template struct SyntaxImpl<Rational>;
template struct SyntaxImpl<GaussianRational>;

}  // namespace detail

}  // namespace lsodot
