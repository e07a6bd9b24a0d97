#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enaqt::cli {

/// Exit codes: 0 success, 1 usage error, 2 invalid parameters, 3 solver failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace enaqt::cli
