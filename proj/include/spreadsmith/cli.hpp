#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spreadsmith {

// Exit codes of the command line front end.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // a verification or check failed
inline constexpr int exit_usage = 2;    // bad flags, bad field, malformed input

// Runs the command line with args[0] as the program name. Output for a
// fixed configuration does not depend on --jobs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spreadsmith
