#pragma once

#include <string>

namespace gtce {

/// Shortest decimal text that parses back to the same double. Negative zero
/// prints as "0" so exports stay byte-stable.
std::string fmt_num(double value);

/// Fixed-precision text for human-facing tables.
std::string fmt_fixed(double value, int digits);

}  // namespace gtce
