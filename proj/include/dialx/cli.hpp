#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dialx {

inline constexpr const char* kLexiconEnv = "DIALX_LEXICONS";

// Entry point of the dialx tool. `args` excludes the program name. Data goes
// to `out`, diagnostics to `err`; returns 0 on success and 2 on any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dialx
