#pragma once

#include <string>
#include <vector>

namespace prophet {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs one subcommand; `args` excludes the program name. Failures are
/// reported on `err` as a JSON object {"error": category, "message": ...}
/// with the category's exit code.
CommandResult execute_command(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace prophet
