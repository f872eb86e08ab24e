#pragma once

#include <string>

namespace spherefv {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Parses a double written by format_double (or any decimal); throws
/// ConfigError on trailing garbage.
double parse_double(const std::string& text);

}  // namespace spherefv
