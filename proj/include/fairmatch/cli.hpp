#pragma once

#include <ostream>

namespace fairmatch {

/// Exit codes: 0 success or PASS, 1 property FAIL or reproduce mismatch, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairmatch
