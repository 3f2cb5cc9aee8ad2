#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unidemand::cli {

// Exit codes: 0 success, 1 unexpected failure, 2 input or domain error,
// 3 resource limit exceeded.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unidemand::cli
