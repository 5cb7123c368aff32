#pragma once

#include <string>

namespace pdbuck {

// Deterministic, locale-free numeric formatting for CSV output:
// 17 significant digits in the shortest `%.17g`-style form.
[[nodiscard]] std::string format_sig17(double x);

// Shortest representation that round-trips exactly (used for config
// serialization).
[[nodiscard]] std::string format_roundtrip(double x);

} // namespace pdbuck
