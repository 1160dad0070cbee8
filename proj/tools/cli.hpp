#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace midas::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kIoError = 3 };

/// Runs one invocation. args excludes the program name. "-" as --input or
/// --output selects the given in/out streams.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace midas::cli
