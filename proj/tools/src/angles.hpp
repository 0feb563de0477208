#pragma once

#include <string>
#include <vector>

namespace mubest::cli {

/// Parses one angle in radians: a decimal number, or a multiple of pi written
/// as "pi", "-pi/2", "3pi/8", "3*pi/8", "2π". Throws DomainError on bad input.
double parse_angle(const std::string& text);

/// Comma-separated angles, or "start:stop:count" for count evenly spaced
/// angles from start to stop inclusive. Both forms may be mixed with commas.
std::vector<double> parse_angle_list(const std::string& text);

/// Comma-separated positive integers.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace mubest::cli
