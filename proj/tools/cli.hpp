#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdho::cli {

enum ExitCode : int {
    ok = 0,
    validation_failure = 2,
    accuracy_failure = 3,
    usage_error = 64,
};

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace tdho::cli
