#pragma once

#include <ostream>

namespace aspinn {

/// Fast oracle/property checks of the core routines. Prints one line per
/// check and returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace aspinn
