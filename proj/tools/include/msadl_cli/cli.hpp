#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msadl::cli {

enum ExitCode : int { Success = 0, Failure = 1, Usage = 2 };

/// Runs one `msadl` invocation. `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msadl::cli
