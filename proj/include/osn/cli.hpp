#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace osn::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 for malformed input or arguments, 2 when the input violates
/// an analysis precondition (for example a disconnected graph).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace osn::cli
