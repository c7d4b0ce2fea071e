#pragma once

#include <string>
#include <vector>

namespace frn {

/// Command-line entry point: simulate | fit | summarize | compare, each
/// driven by a key=value config file.  Returns the process exit status:
/// 0 success, 1 usage, 2 data validation, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace frn
