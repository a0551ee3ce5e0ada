// Command-line entry point, callable from tests.
//
// Subcommands:
//   run     solve a scenario (baseline / individual / community / all) and
//           write cost tables and per-step series into an output directory
//   verify  run the oracle agreement suite
//   gen     write a default config plus synthetic input series
//
// Exit codes: 0 success, 1 infeasible model, 2 bad input or usage.

#pragma once

#include <string>
#include <vector>

namespace flexcomm {

// argv-style entry point; argv[0] is the program name.
int cli_main(int argc, const char* const* argv);

// Convenience overload for tests: arguments without the program name.
int cli_main(const std::vector<std::string>& args);

}  // namespace flexcomm
