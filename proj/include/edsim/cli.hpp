#pragma once

#include <iosfwd>

namespace edsim {

/// Exit codes: 0 on success (including any classified engagement outcome and
/// a feasible or infeasible intercept query), 2 on usage or configuration
/// errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edsim
