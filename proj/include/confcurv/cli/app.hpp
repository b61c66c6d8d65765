#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace confcurv::cli {

/// Parses `args` (without the program name), dispatches to the command and
/// returns the exit code: 0 pass, 1 check failed, 2 invalid parameters
/// (message names the violated condition), 3 nonconvergence. The command's
/// one-line JSON summary goes to `out`, diagnostics to `err`.
[[nodiscard]] int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confcurv::cli
