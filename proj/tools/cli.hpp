#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rayforge/error.hpp"

namespace rayforge::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kNotConverged = 2,
    kUsage = 3,
    kNoMatch = 4,
    kAmbiguous = 5,
};

int exit_code_for(ErrorCode code) noexcept;

/// args[0] is the program name. Results go to `out` unless --out is given;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rayforge::cli
