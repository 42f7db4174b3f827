#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsodot::cli {

enum ExitCode : int {
  kOk = 0,
  kTypeError = 1,
  kParseError = 2,
  kRuntimeError = 3,
  kUsageError = 4,
};

/// Runs one command line (args excludes the program name). Results go to
/// out, diagnostics to err; repl reads from in.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lsodot::cli
