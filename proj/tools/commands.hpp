#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gidx::cli {

enum Exit : int { kPass = 0, kFail = 1, kInputError = 2, kInternalError = 3 };

// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gidx::cli
