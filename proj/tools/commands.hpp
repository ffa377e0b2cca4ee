#pragma once

#include <iosfwd>

namespace holo::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kVerification = 3,
  kIo = 4,
};

/// Entry point of the `holo` tool, with injectable streams for testing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
