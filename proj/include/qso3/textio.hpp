#pragma once

#include <string>
#include <vector>

namespace qso3 {

/// Fixed 12-significant-digit formatting with lowercase exponent; identical
/// configs must produce byte-identical output.
std::string format_double(double x);

/// Parse "a,b,c" or "start:stop:count" into a tau grid.
std::vector<double> parse_grid(const std::string& text);

/// Parse "n" or "a:b" into an inclusive integer range.
std::pair<int, int> parse_int_range(const std::string& text);

}  // namespace qso3
