#pragma once

#include <iosfwd>

namespace statlab::cli {

/// Exit status: 0 all checks pass, 1 a check failed, 2 usage or spec error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace statlab::cli
