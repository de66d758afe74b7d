#pragma once

#include <iosfwd>
#include <string>

namespace edur::cli {

// Exit codes of the driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailed = 1;
inline constexpr int kExitUsage = 2;

// Angle literal: a decimal number, or a multiple/fraction of pi such as
// "pi", "-pi/2", "5pi/18", "2*pi/9", "0.25pi". Values are radians unless
// `degrees` is set, in which case plain numbers are read as degrees and pi
// forms are rejected.
double parse_angle(const std::string& text, bool degrees = false);

// Runs the command line; output goes to `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edur::cli
