#pragma once

#include <ostream>

namespace isd {

// Exit status: 0 success, 1 validation/usage error, 2 I/O or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isd
