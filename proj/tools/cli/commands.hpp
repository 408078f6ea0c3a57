#pragma once

#include <iosfwd>

namespace regimeshift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitDomainError = 2;

/// Entire command-line front end; `out` receives results unless --out is set.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regimeshift::cli
