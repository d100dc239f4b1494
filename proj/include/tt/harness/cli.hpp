#pragma once

#include <iosfwd>

namespace tt::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;  // a run contradicted its [expect] section
inline constexpr int kExitConfig = 2;      // usage, config or input errors

// Entry point of the `tt` tool: validate, run, matrix and trace-stats.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tt::harness
