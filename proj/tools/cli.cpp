#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lsodot/kernel.hpp"
#include "lsodot/matrices.hpp"
#include "lsodot/metatheory.hpp"
#include "lsodot/quantum.hpp"
#include "lsodot/rewrite.hpp"
#include "lsodot/syntax.hpp"
#include "lsodot/typing.hpp"
#include "lsodot/vectors.hpp"

namespace lsodot::cli {

namespace {

using S = GaussianRational;
using T = Term<S>;

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageFailure("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string readAll(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageFailure("cannot write " + path);
  f << text;
}

std::string where(const std::optional<SourceSpan>& sp) {
  if (!sp) return "";
  return std::to_string(sp->line) + ":" + std::to_string(sp->column) + ": ";
}

// Maps exceptions to exit codes; `source` prefixes diagnostics.
int guarded(const std::string& source, std::ostream& err, const std::function<int()>& body) {
  std::string prefix = source.empty() ? "" : source + ":";
  try {
    return body();
  } catch (const ParseError& e) {
    err << prefix << e.what() << "\n";
    return kParseError;
  } catch (const TypeError& e) {
    auto print = [&](const Diagnostic& d) {
      err << prefix << where(d.span) << "error[" << toString(d.kind) << "]: " << d.message << " (at "
          << toString(d.path) << ")\n";
    };
    print(e.primary());
    for (const Diagnostic& d : e.diagnostics()) {
      if (&d != &e.primary()) print(d);
    }
    return kTypeError;
  } catch (const UsageFailure& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const StepBudgetExceeded& e) {
    err << prefix << "error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << prefix << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

// --budget beats LSODOT_BUDGET, which beats the default.
RewriteOptions rewriteOptions(std::optional<std::size_t> flag) {
  RewriteOptions o;
  if (const char* env = std::getenv("LSODOT_BUDGET")) {
    try {
      o.budget = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageFailure(std::string("LSODOT_BUDGET is not a number: ") + env);
    }
  }
  if (flag) o.budget = *flag;
  return o;
}

Proposition propArg(const std::string& text) {
  try {
    return parseProposition(text);
  } catch (const ParseError& e) {
    throw UsageFailure("bad proposition '" + text + "': " + e.what());
  }
}

std::pair<T, Trace<S>> evaluate(const T& t, std::uint64_t seed, const RewriteOptions& opts) {
  Rng rng(seed);
  return sampleNormalize<S>(t, rng, NormWeigher<S>{}, opts);
}

void printTrace(const Trace<S>& trace, std::ostream& out) {
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep<S>& s = trace.steps[i];
    out << i << '\t' << toString(s.rule) << '\t' << toString(s.path) << '\t'
        << (s.probability ? s.probability->toString() : "-") << '\n';
  }
}

// Whole-identifier textual replacement outside scalar braces.
std::string expand(const std::string& text, const std::map<std::string, std::string>& defs) {
  auto start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto inner = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '{') {
      std::size_t j = text.find('}', i);
      j = j == std::string::npos ? text.size() : j + 1;
      out.append(text, i, j - i);
      i = j;
    } else if (start(c)) {
      std::size_t j = i;
      while (j < text.size() && inner(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      auto it = defs.find(word);
      out += it == defs.end() ? word : "(" + it->second + ")";
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string trim(std::string s) {
  auto notSpace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
  return s;
}

int repl(std::istream& in, std::ostream& out, std::ostream& err, std::uint64_t seed, const RewriteOptions& opts) {
  std::map<std::string, std::string> defs;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == ":quit" || line == ":q") break;
    std::string cmd = ":eval";
    std::string rest = line;
    if (line[0] == ':') {
      std::size_t sp = line.find(' ');
      cmd = line.substr(0, sp);
      rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    }
    guarded("", err, [&]() -> int {
      if (cmd == ":seed") {
        try {
          seed = std::stoull(rest);
        } catch (const std::exception&) {
          throw UsageFailure(":seed needs a number");
        }
        return kOk;
      }
      if (cmd == ":let") {
        std::size_t eq = rest.find('=');
        if (eq == std::string::npos) throw UsageFailure(":let name = term");
        std::string name = trim(rest.substr(0, eq));
        std::string body = expand(trim(rest.substr(eq + 1)), defs);
        T t = parseTerm<S>(body);
        typeOf(t);
        defs[name] = body;
        return kOk;
      }
      if (cmd != ":type" && cmd != ":check" && cmd != ":eval") {
        throw UsageFailure("unknown command " + cmd + " (try :check :eval :type :let :seed :quit)");
      }
      T t = parseTerm<S>(expand(rest, defs));
      if (cmd == ":type" || cmd == ":check") {
        Proposition a = typeOf(t);
        out << (cmd == ":check" ? "ok: " : "") << toString(a) << "\n";
      } else {
        typeOf(t);
        out << printTerm(evaluate(t, seed, opts).first) << "\n";
      }
      return kOk;
    });
  }
  return kOk;
}

VShape shapeArg(const std::string& text) { return VShape::of(propArg(text)); }

int fuzz(const std::string& suite, std::size_t n, std::uint64_t seed, unsigned threads,
         const std::optional<std::string>& reportPath, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = suiteNames();
  } else {
    const auto& names = suiteNames();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      std::string all;
      for (const auto& s : names) all += " " + s;
      throw UsageFailure("unknown suite " + suite + "; known:" + all + " all");
    }
    suites.push_back(suite);
  }
  std::ostringstream report;
  bool ok = true;
  for (const std::string& name : suites) {
    SuiteOptions opts;
    opts.n = n;
    opts.seed = seed;
    opts.threads = threads;
    SuiteReport r = runSuite<S>(name, opts);
    out << name << ": " << (r.cases.size() - r.failures()) << "/" << r.cases.size() << " passed\n";
    for (const CaseResult& c : r.cases) {
      report << name << '\t' << c.index << '\t' << c.seed << '\t' << (c.passed ? "pass" : "fail");
      if (!c.passed) {
        report << '\t' << c.term << '\t' << c.detail;
        err << name << " case " << c.index << " (seed " << c.seed << "): " << c.detail << "\n";
        if (!c.term.empty()) err << "  shrunk: " << c.term << "\n";
      }
      report << '\n';
    }
    ok = ok && r.ok();
  }
  if (reportPath) writeFile(*reportPath, report.str());
  return ok ? kOk : kRuntimeError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear proof terms: check, normalize, vectors, matrices, measurement", "lsodot"};
  app.require_subcommand(1);

  std::string file, file2, prop, inProp, outProp, suite = "all", oracle;
  std::optional<std::string> expect, emit, report;
  std::optional<std::size_t> budget;
  std::uint64_t seed = 1;
  std::size_t n = 100, qubits = 1, samples = 1000;
  unsigned threads = 1;
  bool trace = false;

  auto* check = app.add_subcommand("check", "type-check a closed term");
  check->add_option("file", file, "term file")->required();
  check->add_option("--expect", expect, "expected proposition");

  auto* eval = app.add_subcommand("eval", "normalize a closed term");
  eval->add_option("file", file, "term file")->required();
  eval->add_option("--seed", seed, "seed for measurement steps");
  eval->add_flag("--trace", trace, "print the reduction trace before the result");
  eval->add_option("--budget", budget, "step budget");

  auto* replCmd = app.add_subcommand("repl", "read-eval-print loop on standard input");
  replCmd->add_option("--seed", seed, "seed for measurement steps");
  replCmd->add_option("--budget", budget, "step budget");

  auto* vec = app.add_subcommand("vec", "vectors as proofs");
  vec->require_subcommand(1);
  auto* enc = vec->add_subcommand("encode", "scalars (one per line) to a proof");
  auto* dec = vec->add_subcommand("decode", "proof to scalars (one per line)");
  for (auto* c : {enc, dec}) {
    c->add_option("--shape", prop, "vector proposition")->required();
    c->add_option("file", file, "input file (default: standard input)");
  }
  dec->add_option("--budget", budget, "step budget");

  auto* compile = app.add_subcommand("compile-matrix", "matrix to a proof of A -> B");
  compile->add_option("file", file, "matrix file, one row per line")->required();
  compile->add_option("--in", inProp, "domain A")->required();
  compile->add_option("--out", outProp, "codomain B")->required();
  compile->add_option("--emit", emit, "also write the term to this file");

  auto* apply = app.add_subcommand("apply", "apply a proof of A -> B to a vector");
  apply->add_option("term", file, "term file")->required();
  apply->add_option("vector", file2, "vector file, one scalar per line")->required();
  apply->add_option("--budget", budget, "step budget");

  auto* quantum = app.add_subcommand("quantum", "measurement");
  quantum->require_subcommand(1);
  auto* measure = quantum->add_subcommand("measure", "sample the first-qubit measurement of a state");
  measure->add_option("file", file, "proof of Q_n")->required();
  measure->add_option("--n", qubits, "number of qubits")->required()->check(CLI::PositiveNumber);
  auto* deutsch = quantum->add_subcommand("deutsch", "Deutsch's algorithm on a one-bit oracle");
  deutsch->add_option("--oracle", oracle, "c0, c1, id or not")->required()->check(CLI::IsMember({"c0", "c1", "id", "not"}));
  for (auto* c : {measure, deutsch}) {
    c->add_option("--samples", samples, "number of runs");
    c->add_option("--seed", seed, "base seed");
    c->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  auto* fuzzCmd = app.add_subcommand("fuzz", "property suites over generated typed terms");
  fuzzCmd->add_option("--suite", suite, "suite name or all");
  fuzzCmd->add_option("--n", n, "cases per suite");
  fuzzCmd->add_option("--seed", seed, "base seed");
  fuzzCmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  fuzzCmd->add_option("--report", report, "write per-case records here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (check->parsed()) {
    return guarded(file, err, [&] {
      T t = parseTerm<S>(readFile(file));
      if (expect) {
        checkClosed(t, propArg(*expect));
        out << toString(propArg(*expect)) << "\n";
      } else {
        out << toString(typeOf(t)) << "\n";
      }
      return kOk;
    });
  }
  if (eval->parsed()) {
    return guarded(file, err, [&] {
      RewriteOptions opts = rewriteOptions(budget);
      T t = parseTerm<S>(readFile(file));
      typeOf(t);
      auto [nf, tr] = evaluate(t, seed, opts);
      if (trace) printTrace(tr, out);
      out << printTerm(nf) << "\n";
      return kOk;
    });
  }
  if (replCmd->parsed()) return repl(in, out, err, seed, rewriteOptions(budget));
  if (enc->parsed()) {
    return guarded(file, err, [&] {
      VShape a = shapeArg(prop);
      VectorValue<S> v = parseVector<S>(file.empty() ? readAll(in) : readFile(file));
      out << printTerm(encode(v, a)) << "\n";
      return kOk;
    });
  }
  if (dec->parsed()) {
    return guarded(file, err, [&] {
      VShape a = shapeArg(prop);
      T t = parseTerm<S>(file.empty() ? readAll(in) : readFile(file));
      checkClosed(t, a.prop());
      out << printVector(decode(t, a, rewriteOptions(budget)));
      return kOk;
    });
  }
  if (compile->parsed()) {
    return guarded(file, err, [&] {
      VShape a = shapeArg(inProp);
      VShape b = shapeArg(outProp);
      T f = compileMatrix(parseMatrix<S>(readFile(file)), a, b);
      std::string text = printTerm(f) + "\n";
      if (emit) writeFile(*emit, text);
      out << text;
      return kOk;
    });
  }
  if (apply->parsed()) {
    return guarded(file, err, [&]() -> int {
      T f = parseTerm<S>(readFile(file));
      Proposition ty = typeOf(f);
      if (ty.kind() != PropKind::Imp) throw ShapeError("term has type " + toString(ty) + ", not A -> B");
      VShape a = VShape::of(ty.left());
      VShape b = VShape::of(ty.right());
      VectorValue<S> u;
      try {
        u = parseVector<S>(readFile(file2));
      } catch (const ParseError& e) {
        err << file2 << ":" << e.what() << "\n";
        return static_cast<int>(kParseError);
      }
      out << printVector(applyLinear(f, u, a, b, rewriteOptions(budget)));
      return kOk;
    });
  }
  auto printCounts = [&](const OutcomeCounts& c) {
    out << "0\t" << c.zero << "\n1\t" << c.one << "\n";
    if (c.none) out << "none\t" << c.none << "\n";
  };
  if (measure->parsed()) {
    return guarded(file, err, [&] {
      T state = parseTerm<S>(readFile(file));
      checkClosed(state, qubitProp(qubits));
      printCounts(sampleOutcomes(T::app(measureOp<S>(qubits), state), samples, seed, threads));
      return kOk;
    });
  }
  if (deutsch->parsed()) {
    return guarded("", err, [&] {
      OutcomeCounts c = deutschDemo<S>(*parseOracle(oracle), samples, seed, threads);
      printCounts(c);
      out << "answer\t" << (c.one == 0 && c.zero > 0 ? "constant" : c.zero == 0 && c.one > 0 ? "balanced" : "mixed")
          << "\n";
      return kOk;
    });
  }
  if (fuzzCmd->parsed()) {
    return guarded("", err, [&] { return fuzz(suite, n, seed, threads, report, out, err); });
  }
  return kUsageError;
}

}  // namespace lsodot::cli
