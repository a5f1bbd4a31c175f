#pragma once

#include <iosfwd>

namespace metasim::sim {

// Exit codes of the metasim command line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_load_failure = 1,
    exit_invariant_breach = 2,
    exit_transcript_mismatch = 3,
};

// Entry point shared by the executable and tests. Output goes to `out`,
// diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metasim::sim
