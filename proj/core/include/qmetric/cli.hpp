#pragma once

namespace qmetric {

// Full command-line driver. Exit codes: 0 on success, 1 for configuration,
// parsing or usage problems, 2 for numerical failures. Kept callable from
// tests so exit codes and output can be checked in process.
int cli_main(int argc, const char* const* argv);

}  // namespace qmetric
