#pragma once

#include <iosfwd>

namespace wiresynth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `wiresynth` tool: gen, render, tokenize, detokenize,
/// export, eval.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wiresynth
