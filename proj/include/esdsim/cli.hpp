#pragma once

namespace esd::cli {

// Full command-line front end. Returns the process exit code:
//   0 success, 1 verification failure, 2 usage or configuration error,
//   3 I/O failure.
int run_main(int argc, const char* const* argv);

}  // namespace esd::cli
