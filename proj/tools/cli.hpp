#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pogen::cli
{

// Exit codes beyond the three verdicts.
inline constexpr int exit_safe = 0;
inline constexpr int exit_unsafe = 1;
inline constexpr int exit_unknown = 2;
inline constexpr int exit_error = 3;       // usage, unreadable input, parse errors
inline constexpr int exit_refused = 4;     // strategy not applicable
inline constexpr int exit_unsound = 5;     // soundness alarm or broken certificate

// argv[0] is the program name.
int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err );

} // namespace pogen::cli
