#pragma once

#include "ivexpand/verify.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ivexpand {

enum class OutputFormat { text, json };

// Process exit codes of the command-line front end.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 2;
inline constexpr int math_failure = 3;
inline constexpr int verification_failure = 4;
} // namespace exit_code

// Reports ordered by check_id. Text: a header line, then one
// PASS/FAIL/SKIP line per check (failures followed by their worst witness)
// and a summary line.
std::string render_report(std::vector<Report> reports, OutputFormat format);

// Runs one invocation (argv[0] is the program name); output goes to `out`,
// diagnostics and text-mode warnings to `err`. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ivexpand
