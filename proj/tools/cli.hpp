#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperaug::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `hyperaug` command line. args[0] is the program name. Regular
/// output (resolved config, reports, bench line) goes to `out`; errors and
/// log messages go to `err`. Log verbosity comes from HYPERAUG_LOG
/// (trace, debug, info, warn, error, off; default warn).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperaug::cli
