#pragma once

#include <string>
#include <vector>

namespace ccplan::cli {

// Parses `args` (without the program name) and runs the selected command.
// Returns the process exit code; failures are reported as JSON on stderr.
int run(const std::vector<std::string>& args);

}  // namespace ccplan::cli
