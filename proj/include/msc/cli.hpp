#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msc::cli {

enum ExitCode { kOk = 0, kValidationErrors = 1, kUsage = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msc::cli
