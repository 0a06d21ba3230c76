#pragma once

#include <iosfwd>

namespace domlab::cli {

/// Exit codes: 0 computed and verified, 1 computed but a verification failed
/// (or the solver diverged), 2 invalid input or violated hypothesis.
enum Exit : int { ok = 0, verification_failed = 1, invalid = 2 };

/// Runs one `domlab` command line. JSON reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace domlab::cli
