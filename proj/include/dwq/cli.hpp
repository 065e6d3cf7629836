#ifndef DWQ_CLI_HPP
#define DWQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dwq {

/// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Run the tool on argv[1..] style arguments. Normal output goes to out,
/// diagnostics and warnings to err. Returns the exit code; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dwq

#endif  // DWQ_CLI_HPP
