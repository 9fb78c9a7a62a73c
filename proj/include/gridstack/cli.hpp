#ifndef GRIDSTACK_CLI_HPP
#define GRIDSTACK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gridstack::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidConfig = 1,
    kUsage = 2,
    kSolverFailure = 3,
};

/// Runs one command line (without the program name). Summaries go to `out`,
/// diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

} // namespace gridstack::cli

#endif
