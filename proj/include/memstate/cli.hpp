#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace memstate {

/// Entry point of the `memstate` command line tool. `args` excludes the
/// program name. Exit codes: 0 success, 1 usage or configuration error,
/// 2 I/O or file-format error.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace memstate
