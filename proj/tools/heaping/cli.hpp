#pragma once

#include <iosfwd>

namespace heaping::cli {

/// Parses and runs one command line. Exit codes: 0 success, 1 runtime
/// failure, 2 usage or schema error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heaping::cli
