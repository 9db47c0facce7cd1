#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace offload {

// Exit codes: 0 success, 1 validation/usage error, 2 infeasibility,
// 3 unsupported structure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace offload
