#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace qrobust::cli {

/// Entry point of the `qrobust` tool. `args` excludes the program name.
/// Returns the process exit status.
int cli_main(std::span<const std::string> args, std::ostream &out, std::ostream &err);

} // namespace qrobust::cli
