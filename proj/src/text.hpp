#pragma once

// String helpers shared by the config, CSV and model-file readers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace marswpt::text {

std::string_view trim(std::string_view s) noexcept;

/// Splits on `sep`, trimming each field. An empty input yields one empty field.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Whole-string parse; accepts a leading '+'. nullopt on any trailing text.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<unsigned long long> parse_uint(std::string_view s) noexcept;

/// Shortest form is not required; 17 significant digits always round-trips.
std::string format_double(double value);

std::string lower(std::string_view s);

}  // namespace marswpt::text
