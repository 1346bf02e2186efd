#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stpa {

/// Command-line driver. `args` excludes the program name.
/// Exit codes: 0 ok, 1 diagnostics with errors, 2 usage or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stpa
