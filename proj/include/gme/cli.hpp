#pragma once

#include <iosfwd>

namespace gme::cli {

// Full command-line entry point, callable in-process for tests.  Returns the
// process exit code: 0 success, 1 usage or parse errors, 2 inputs that parse
// but fail physical validation.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gme::cli
