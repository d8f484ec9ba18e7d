#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netcpd::cli {

/// Runs the command line `args` (without the program name). Returns the process
/// exit status: 0 on success whatever was detected, 1 on runtime errors, and
/// the CLI11 code for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netcpd::cli
