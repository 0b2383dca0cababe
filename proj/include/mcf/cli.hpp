#pragma once

#include <string>
#include <vector>

namespace mcf::cli {

// Entry point shared by the binary and the tests.
// Exit codes: 0 ok, 2 config error, 3 runtime/validation failure.
int run(const std::vector<std::string>& args);

}  // namespace mcf::cli
