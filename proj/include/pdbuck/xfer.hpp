#pragma once

#include "pdbuck/config.hpp"

namespace pdbuck {

// Power-stage low-pass filter G1(s) = (Rc*C*s + 1) /
// (L*C*(1 + Rc/R)*s^2 + (L/R + Rc*C)*s + 1); G1(0) = 1 always.
[[nodiscard]] RationalFunction buck_output_filter(const ConverterConfig& cfg);

// Current-sense path G_i(s) = Rs*(C*(R+Rc)*s + 1) /
// (L*C*(R+Rc)*s^2 + (L + R*Rc*C)*s + R); G_i(0) = Rs/R.
// Throws ModeMismatch unless cfg.mode == CurrentMode.
[[nodiscard]] RationalFunction current_sense_tf(const ConverterConfig& cfg);

// Composed open-loop transfer function:
//   VoltageMode: G = G1*G2
//   CurrentMode: G = G1*G2 - G_i
// brought to a single rational function without common-factor cancellation.
[[nodiscard]] RationalFunction open_loop_tf(const ConverterConfig& cfg);

} // namespace pdbuck
