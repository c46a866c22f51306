#pragma once

#include <string>

namespace ckn {

/// Fixed float format used by every emitted report: 17 significant digits,
/// locale-independent, byte-stable across runs.
std::string format_double17(double x);

} // namespace ckn
