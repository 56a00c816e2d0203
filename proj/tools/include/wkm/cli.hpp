#ifndef WKM_CLI_HPP
#define WKM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace wkm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFeasibility = 3;

/// Runs one invocation of the `wkm` command line. `args` excludes the program
/// name. Reports go to `out` unless --output names a file; diagnostics go to
/// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wkm::cli

#endif  // WKM_CLI_HPP
