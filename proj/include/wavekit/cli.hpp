#pragma once

// Command-line front end. Every analysis in the library is reachable as a
// subcommand; output is plain text or JSON (--json), and all randomized
// commands take an explicit --seed.

#include <iosfwd>
#include <string>
#include <vector>

namespace wavekit::cli {

// Runs one invocation; `args` excludes the program name.
// Exit codes: 0 = success / property verified, 1 = a verification failed,
// 2 = usage or input-format error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wavekit::cli
