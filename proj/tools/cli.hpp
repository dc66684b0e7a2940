#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secik::cli {

enum ExitCode { kOk = 0, kInputError = 1, kSolverError = 2 };

/// Runs one CLI invocation. `args` excludes the program name. Results go to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace secik::cli
