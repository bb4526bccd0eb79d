#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwalk_cli {

enum ExitCode { kExitOk = 0, kExitNumerical = 1, kExitValidation = 2 };

/// Runs one command line (args excludes the program name). Reports go to the
/// file given by --output (relative paths resolve against QWALK_OUTPUT_DIR),
/// to QWALK_OUTPUT_DIR/<command>.<ext> when only the variable is set, or to
/// `out` otherwise. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses an angle in radians: a plain number, or a multiple of pi such as
/// "pi", "pi/4", "3pi/2", "pi/60" and "pi/2N" (N is replaced by `n`).
double parse_angle(const std::string& text, long n);

}  // namespace qwalk_cli
