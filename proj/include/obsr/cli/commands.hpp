#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace obsr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Subcommands: reduce, mine, eval, ablate, simulate, report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obsr::cli
