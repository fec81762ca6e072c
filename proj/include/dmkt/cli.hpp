#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmkt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmkt::cli
