#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace creature::cli {

/// Runs one subcommand. Returns 0 when every check passed, 1 on a verification
/// failure and 2 on usage or input errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace creature::cli
