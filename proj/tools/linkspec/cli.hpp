#pragma once

#include <iosfwd>

namespace linkspec::cli {

// Full command line (argv[0] included). Returns the process exit status:
// 0 ok, 2 validation or parse failure, 3 numeric failure, 4 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linkspec::cli
