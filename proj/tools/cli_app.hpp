#pragma once

#include <iosfwd>

namespace cmatch::cli {

/// Runs the command line. Returns 0 on success, 2 on input errors and 3 on
/// computation errors. Results go to --out or `out`; messages to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmatch::cli
