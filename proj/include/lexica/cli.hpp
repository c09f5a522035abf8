#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexica::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kInternalError = 3,
};

/// Runs one subcommand. `args` excludes the program name. Logs and usage go
/// to `err`; `out` only receives streams requested with --output=-.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace lexica::cli
