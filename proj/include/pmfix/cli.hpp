#pragma once

// The `pmfix` command line. Exit codes: 0 ok, 1 a check or solve reported a
// violation, 2 malformed input (one `error:` line on the error stream).

#include <iosfwd>

namespace pmfix {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmfix
