#pragma once

#include <string>

namespace topodem {

/// Formats with 12 significant digits; the default for serialized numbers.
std::string format_sig(double value);

/// Shortest representation that round-trips to the same double.
std::string format_full(double value);

/// Fixed 12 decimal places; used for distances printed to stdout.
std::string format_fixed(double value);

} // namespace topodem
