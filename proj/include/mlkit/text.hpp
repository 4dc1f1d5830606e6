#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mlkit {

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

// Shortest decimal form that parses back to the identical double.
std::string fmt_double(double v);
// Fixed-point rendering with the given number of decimals.
std::string fmt_fixed(double v, int places);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Throwing variants for formats where a malformed number is a hard error.
double to_double(std::string_view s);
long long to_int(std::string_view s);

}  // namespace mlkit
