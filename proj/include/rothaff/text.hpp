#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rothaff {

// Locale-independent number formatting.
std::string format_fixed(double x, int digits);
// Shortest representation that parses back to the same double.
std::string format_shortest(double x);
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

// Quotes a CSV field when it contains separators or quotes.
std::string csv_field(const std::string& s);

}  // namespace rothaff
