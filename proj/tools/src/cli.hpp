#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nccw::cli {

enum ExitCode : int {
    success = 0,
    verification_failure = 1,
    input_error = 2,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nccw::cli
