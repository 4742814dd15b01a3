#pragma once

#include <iosfwd>

namespace strongdet::cli {

/// Exit codes: 0 success/pass, 1 semantic failure, 2 invalid input,
/// 3 numerical error.
enum ExitCode : int { kOk = 0, kFailed = 1, kInvalidInput = 2, kNumericalError = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strongdet::cli
