#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tslice {

enum ExitCode : int { exit_ok = 0, exit_failed_report = 1, exit_input_error = 2, exit_solver_stall = 3 };

/// Runs one CLI invocation; args excludes the program name.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tslice
