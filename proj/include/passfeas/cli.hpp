#pragma once

#include <iosfwd>

namespace passfeas {

/// Entry point behind the `passfeas` executable. Returns the process exit status;
/// fatal errors print one diagnostic line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace passfeas
