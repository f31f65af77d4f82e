#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyevac::cli {

// Exit codes: 0 success, 1 verification or computation failure, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyevac::cli
