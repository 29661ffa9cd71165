#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scoop::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs `scoop <subcommand> ...` with argv[0] excluded from `args`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scoop::cli
