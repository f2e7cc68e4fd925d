#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unimod::cli {

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDegenerate = 3;

// args excludes the program name, e.g. {"solve", "A.json", "--bits", "2"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unimod::cli
