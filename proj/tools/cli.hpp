#pragma once

#include <ostream>

namespace mfock {

/// Parses argv and runs one subcommand. Returns 0 on success, 1 when a
/// verification fails, 2 on a usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfock
