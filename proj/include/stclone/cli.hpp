#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stclone {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;

/**
 * Entry point of the `stclone` tool. `args[0]` is the program name.
 *
 *   stclone detect --root DIR [...]
 *   stclone study sample --detections PATH [...]
 *   stclone study icc --ratings FILE [...]
 *
 * Returns 0 on success, 2 on usage errors and 3 on unreadable or invalid input.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stclone
