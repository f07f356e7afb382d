#pragma once

#include <string>
#include <vector>

namespace jsr::cli {

// Full command-line entry point (everything after argv[0]); returns the
// process exit code. Kept in the library so tests can drive it in-process.
int cli_main(const std::vector<std::string>& args);

}  // namespace jsr::cli
