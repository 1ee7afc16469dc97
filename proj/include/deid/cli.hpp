#pragma once

#include <string>
#include <vector>

namespace deid::cli {

// The whole command-line tool behind a callable entry point so tests can
// drive it in-process.  `args` excludes the program name.  Returns the
// process exit code: 0 success, 1 usage, 2 data error, 3 recognizer service
// error.
int run(const std::vector<std::string>& args);

} // namespace deid::cli
