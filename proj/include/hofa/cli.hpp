#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hofa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitWorkLimit = 3;

/// Runs one command line (args excludes the program name). The artifact goes
/// to `out` unless --out names a file; the resolved config, the work
/// estimate and any error go to `err` as JSON lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hofa::cli
