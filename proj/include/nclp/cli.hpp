#pragma once

#include <ostream>

namespace nclp {

// Entry point of the `nclp` tool. Exit status: 0 success, 1 some check
// failed or errored, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nclp
