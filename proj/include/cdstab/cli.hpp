#pragma once

#include <iosfwd>

namespace cdstab {

// Exit codes: 0 success, 1 a run or check failed, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cdstab
