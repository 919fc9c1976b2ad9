#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quadforge::cli {

/// Exit codes of the `quadforge` command.
enum ExitCode : int {
    kOk = 0,
    /// Inadmissible or unsatisfiable request, failed expectation, failed verification.
    kDomainFailure = 1,
    /// Unreadable or malformed input, bad usage.
    kInputError = 2,
};

/// Runs one command line (`args[0]` is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quadforge::cli
