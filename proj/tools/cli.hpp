// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace moore::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 2,
    kNumericalFailure = 3,
};

/// Runs `moore_cavity` with args (args[0] is the program name). Tables go to
/// `out` unless --out is given; messages and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat key=value file. '#' starts a comment line; blank lines are skipped.
/// Keys are long flag names without the leading dashes.
/// Throws std::runtime_error on unreadable files or malformed lines.
std::map<std::string, std::string> read_config(const std::string& path);

/// Shortest of %.15g, %.16g, %.17g that reads back exactly; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_number(double v);

}  // namespace moore::cli
