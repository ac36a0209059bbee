#pragma once

namespace qsc {

// Full front end: parses argv, dispatches run | suite | inspect | plot.
// Returns the process exit code: 0 ok, 1 runtime failure, 2 bad usage/config.
int run_cli(int argc, const char* const* argv);

}  // namespace qsc
