#pragma once

#include <string>
#include <vector>

namespace strata {
namespace cli {

/// Runs one CLI command. Exit codes: 0 claim verified/positive, 1 claim
/// refuted/negative, 2 inconclusive, 3 input error. Diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cli
} // namespace strata
