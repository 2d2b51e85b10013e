#pragma once

#include <string>
#include <string_view>

namespace mrhydro {

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// Locale-independent general format with the given significant digits.
/// Non-finite values print as `inf`, `-inf` or `nan`.
std::string format_significant(double value, int digits = 9);

/// Strict parse of a full string as a double; returns false on trailing
/// garbage, empty input or overflow.
bool parse_double(std::string_view text, double& out);

}  // namespace mrhydro
