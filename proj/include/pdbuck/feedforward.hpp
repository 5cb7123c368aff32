#pragma once

#include "pdbuck/harmonic.hpp"

namespace pdbuck {

// Feedforward ramp endpoint gains: Vl = kl*Vs, Vh = kh*Vs.
struct FeedforwardGains {
    double kl = 0.0;
    double kh = 0.0;
};

struct HExtrema {
    double h_max = 0.0;
    double h_min = 0.0;
    double d_at_max = 0.0; // s
    double d_at_min = 0.0; // s
};

struct DesignResult {
    FeedforwardGains gains;
    bool prevented = false;
};

// H(d) = 2 sum_{k>=1} Re[-G(j(k-1/2)w) + (1 - e^{jkwd}) G(jkw)]; the ratio
// (Vh - Vl) / vs_critical(d) for fixed ramps, and the quantity compared with
// kh - kl under feedforward ramps.
[[nodiscard]] double h_of_d(const ConverterConfig& cfg, double d,
                            const SeriesConfig& series);
[[nodiscard]] double h_of_d(const HarmonicEngine& eng, double d);

// Grid scan (grid_points >= 128, clipped endpoints included) plus
// golden-section refinement to 1e-10 T around the best cells.
[[nodiscard]] HExtrema h_extrema(const ConverterConfig& cfg,
                                 const SeriesConfig& series,
                                 int grid_points = 1024);
[[nodiscard]] HExtrema h_extrema(const HarmonicEngine& eng,
                                 int grid_points = 1024);

// Strict prevention condition: (kh - kl) > h_max or (kh - kl) < h_min;
// equality counts as not prevented.
[[nodiscard]] bool prevents_bifurcation(const FeedforwardGains& gains,
                                        const HExtrema& ext);

// Low-frequency duty relation
//   d/T = (G(0) Vs - Vl + g Vr) / (G(0) Vs - Vl + Vh)
// with ramp endpoints taken from cfg.ramp at this Vs. Callers must check the
// result lies in (0, 1). Throws DegenerateDenominator.
[[nodiscard]] double duty_ratio(const ConverterConfig& cfg, double Vs);

// Average output prediction [vo]avg = (kh Vs - g Vr) / (G(0) - kl + kh) with
// kl = Vl/Vs, kh = Vh/Vs for fixed ramps. Throws DegenerateDenominator.
[[nodiscard]] double average_output(const ConverterConfig& cfg, double Vs);

// kh = 0, kl = G(0) + g Vr / target_vo; verdict from the strict combined
// condition kl < -h_max or kl > -h_min. Throws InvalidConfig when the
// resulting gains are degenerate (kl = 0 = kh).
[[nodiscard]] DesignResult design_line_regulation(const ConverterConfig& cfg,
                                                  double target_vo,
                                                  const HExtrema& ext);

} // namespace pdbuck
