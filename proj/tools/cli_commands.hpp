#pragma once

namespace ltrace::cli {

/// Exit codes: 0 completed (any verdict), 1 internal error, 2 user input error.
int run(int argc, char** argv);

}  // namespace ltrace::cli
