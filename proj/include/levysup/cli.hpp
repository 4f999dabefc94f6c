#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levysup {

// Exit codes: 0 success, 1 validation failure, 2 usage or domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levysup
