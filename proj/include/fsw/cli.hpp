#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsw {

/// Command-line entry point. args[0] is the program name. Returns 0 on
/// success or PASS, 1 if a check fails and 2 on usage or parameter errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsw
