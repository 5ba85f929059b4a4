#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polarcs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDecodeFailure = 2;

/// Runs one command. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace polarcs
