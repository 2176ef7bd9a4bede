#pragma once

#include <string>
#include <vector>

namespace sifdecay {

// Front end behind the `sif` binary, separated so tests can drive it in
// process.  `args` excludes the program name.  Returns the process exit code:
// 0 all checks passed, 1 usage/IO/schema problem, 2 certification failure or
// indeterminate result.
int run_cli(const std::vector<std::string>& args);

}  // namespace sifdecay
