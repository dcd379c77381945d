// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace citeaccel {

// Runs one subcommand. `args` excludes the program name. Returns 0 on
// success, 1 on a usage or data error, 2 on an internal error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace citeaccel
