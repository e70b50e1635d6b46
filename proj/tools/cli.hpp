#pragma once

#include <string>
#include <vector>

namespace logens {

/// Runs one `logens` invocation and returns its exit code: 0 success,
/// 1 usage or configuration error, 2 data error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace logens
