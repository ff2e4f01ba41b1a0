#pragma once

#include <iosfwd>

#include "minkiso/error.hpp"

namespace minkiso::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputParse = 2,
  kGeometry = 3,
  kNotAnIsophote = 4,
};

/// Exit status for a library error.
int exit_code(ErrorKind kind) noexcept;

/// Entry point of the `isophote` tool. Results go to `out` (JSON unless a file is
/// requested), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minkiso::cli
