#pragma once

// Command-line front end. Exit codes: 0 success, 1 input error,
// 2 a quadrature did not converge, 3 a checked property failed.

namespace chernreg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitPropertyFailed = 3;

int run_cli(int argc, const char* const* argv);

}  // namespace chernreg
