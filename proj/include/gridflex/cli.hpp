#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridflex::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kDataQualityError = 3,
  kInvariantError = 4,
};

/// Runs the command line tool. Arguments exclude the program name.
/// Errors are reported on `err` as one JSON object per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridflex::cli
