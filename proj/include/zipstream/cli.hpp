#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zs {

// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage error, 3 analysis error.
// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zs
