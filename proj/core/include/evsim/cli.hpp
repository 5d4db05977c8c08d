#pragma once

namespace evsim {

/// Command-line entry point, shared by the installed binary and in-process
/// tests. Returns the process exit code: 0 success, 2 configuration error,
/// 3 input-data error, 4 internal error.
int run_cli(int argc, const char* const* argv);

} // namespace evsim
