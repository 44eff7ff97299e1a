#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sinkx::cli {

/// Runs one command. Exit code 0: success or positive verdict; 1: negative
/// verdict (invalid extension, obstruction, closure mismatch, failed
/// verification); 2: usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sinkx::cli
