#pragma once

namespace mobw {

// Entry point behind the `mobw` binary; exposed so tests can drive the CLI
// in-process. Returns the process exit code (0 success, 2 usage error,
// 1 runtime failure with a JSON error record on stderr).
int cli_main(int argc, const char* const* argv);

}  // namespace mobw
