#pragma once

#include <iosfwd>

namespace personrec {

/// Entry point for the `personrec` tool: gen, eval, recommend, stats.
/// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace personrec
