#pragma once

#include <iosfwd>

namespace lse::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kBoundViolation = 1,  ///< experiment only
    kBadInput = 2,        ///< unparsable arguments, bad vectors, I/O failures
};

/// Entry point of the `lse` tool with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lse::cli
