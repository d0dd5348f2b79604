#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace esr {

/// Shortest round-trippable form ("%.17g"), with inf/-inf/nan spelled out.
std::string format_double(double v);
/// Inverse of format_double; throws DataError.
double parse_double(std::string_view t);

std::string join_doubles(const std::vector<double>& v);
std::vector<double> split_doubles(std::string_view t);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace esr
