#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "xenakis/error.hpp"

namespace xenakis::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kProvider = 3,
};

ExitCode exit_code_for(ErrorCode code) noexcept;

/// Runs one `xenakis` invocation. `args[0]` is the program name. Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xenakis::cli
