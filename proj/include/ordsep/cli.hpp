#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordsep {

// Command-line front end.  `args` excludes the program name.
// Exit codes: 0 success, 1 resource/size guard, 2 validation or usage
// error, 3 cross-check failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ordsep
