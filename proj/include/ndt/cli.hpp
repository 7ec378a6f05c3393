#pragma once

#include <iosfwd>

namespace ndt {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitIo = 3, kExitUnsupported = 4, kExitAssertion = 5 };

// Entry point of the ndt-lab command line; testable without a process boundary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ndt
