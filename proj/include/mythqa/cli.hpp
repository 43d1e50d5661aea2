#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mythqa::cli {

// Runs one command line. Data goes to `out`, diagnostics to `err`. Returns the
// process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mythqa::cli
