#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concierge::cli {

// Exit codes: 0 success, 1 user error (bad flags, unknown ids, invalid
// input files), 2 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace concierge::cli
