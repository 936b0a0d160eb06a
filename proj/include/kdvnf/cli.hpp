#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kdvnf/config.hpp"

namespace kdvnf {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

// Executes a validated configuration: writes the manifest, then the results.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command-line entry point (argument parsing included).
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdvnf
