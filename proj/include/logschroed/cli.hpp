#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logschroed::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kError = 2 };

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name: `<subcommand> [--config PATH] [--out DIR] [--threads N] [--quiet]`.
/// Writes `<subcommand>.json` and the subcommand's CSV files into the
/// output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Subcommand names in the order shown by --help.
const std::vector<std::string>& subcommands();

}  // namespace logschroed::cli
