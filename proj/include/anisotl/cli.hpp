#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anisotl {

inline constexpr const char* tool_version = "0.1.0";

/// Command dispatcher: expansive | orbit | classify | norm | witness | verify.
/// Writes a JSON run manifest to out. Exit codes: 0 success, 1 invalid input,
/// 2 numerical-inconclusive (indeterminate expansiveness, Unknown verdict,
/// inconclusive law fit).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace anisotl
