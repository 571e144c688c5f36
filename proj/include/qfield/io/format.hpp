#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace qfield::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Parses the whole of `text` as a double; nullopt on any leftover input.
std::optional<double> parse_double(std::string_view text);
std::optional<long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace qfield::io
