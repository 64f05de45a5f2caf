#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ucm {

enum ExitCode : int {
  kExitOk = 0,
  kExitFindings = 1,  // validation or analysis findings
  kExitUsage = 2,
  kExitGuard = 3,  // enumeration guard exceeded
};

struct CliEnvironment {
  /// Value of UCM_GUARD_STATES, if set.
  std::optional<std::string> guard_states;

  static CliEnvironment from_process();
};

/// Runs one `ucm` invocation. `args` excludes the program name. Report text
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace ucm
