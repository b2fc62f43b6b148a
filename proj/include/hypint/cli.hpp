#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "hypint/numerics.hpp"

namespace hypint {

// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // domain, constraint or geometry error; failed identity
inline constexpr int kExitConvergence = 2;
inline constexpr int kExitUsage = 3;

// "re" or "re,im"; empty when the literal is malformed.
std::optional<Complex> parse_complex(std::string_view text);

// Runs one command line (argv[0] is the program name). Output goes to out
// unless --out names a file; diagnostics go to err, one line each.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypint
