#pragma once

#include <string>

namespace bclab {

/// '.' decimal point, no grouping, 17 significant digits (round-trip safe).
std::string format_double(double x);

}  // namespace bclab
