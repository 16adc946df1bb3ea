#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rotlip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Splits "1,2,3" into numbers; throws ParseError on malformed input.
std::vector<long double> parse_numbers(const std::string& text);

}  // namespace rotlip::cli
