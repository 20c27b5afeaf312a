#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mandeldecor::cli {

// args excludes the program name. Returns the process exit status:
// 0 success, 1 computation or I/O failure, 2 usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mandeldecor::cli
