#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edhg {

// Runs the `edhg` command line. args[0] is the program name. Returns the
// process exit code: 0 success, 1 validation failure or bad usage, 2 I/O
// failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace edhg
