#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crabnet::cli {

/// Entry point shared by the executable and the tests. Returns the process exit code:
/// 0 on success, 1 on a runtime failure, 2 on usage errors or a missing scenario.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crabnet::cli
