#pragma once

#include <string>
#include <string_view>

namespace boson_decay {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Inverse of format_double; accepts "nan", "inf", "-inf". Throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace boson_decay
