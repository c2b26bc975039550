#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netsmith::cli {

enum ExitCode { kSuccess = 0, kNotCertified = 1, kUsage = 2, kNumeric = 3 };

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netsmith::cli
