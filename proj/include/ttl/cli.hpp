#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttl {

// Exit codes: 0 verdict true, 1 verdict false, 2 input error,
// 3 capability error (engine cannot decide the request).
inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapability = 3;

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ttl
