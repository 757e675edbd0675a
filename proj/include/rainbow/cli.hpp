#pragma once

#include <iosfwd>

namespace rainbow {

/// Entry point of the `rainbow` binary. Exit codes: 0 success, 1 domain
/// failure, 2 usage error. Payloads go to out (JSON, or CSV for sweep);
/// diagnostics go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rainbow
