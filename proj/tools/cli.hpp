#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padbench::cli {

/// Exit codes of the padbench command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitProcessing = 3;

/// Runs one padbench invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padbench::cli
