#pragma once
// Command-line front end. Exit codes: 0 success, 2 usage, 3 I/O or file
// format, 4 numeric failure or unreachable accuracy.
#include <iosfwd>

namespace lcc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lcc
