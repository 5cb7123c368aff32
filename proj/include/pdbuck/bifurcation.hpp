#pragma once

#include <optional>
#include <vector>

#include "pdbuck/harmonic.hpp"

namespace pdbuck {

// Intersection of the period-one curve with the critical curve.
struct BifurcationPoint {
    double vs_star = 0.0;   // V
    double d_star = 0.0;    // s
    double duty_star = 0.0; // = 1 - d_star / T
};

// Sampled overlay of both curves for plotting; empty cells where a curve has
// no solution at that phase.
struct CurveTable {
    struct Row {
        double d = 0.0; // s
        std::optional<double> vs_eq9;  // period-one curve (V)
        std::optional<double> vs_eq11; // critical curve (V)
    };
    std::vector<Row> rows;
};

// Scans F(d) = vs_period_one(d) - vs_critical(d) over the clipped domain on a
// uniform grid (grid_points >= 64) and refines every sign change where both
// curves are solvable by bisection to |dd| < 1e-12 T. Results are ordered by
// ascending vs_star; an empty list means no period doubling occurs.
// Requires a fixed ramp (InvalidConfig otherwise).
[[nodiscard]] std::vector<BifurcationPoint> find_period_doubling(
    const ConverterConfig& cfg, const SeriesConfig& series,
    int grid_points = 1024);
[[nodiscard]] std::vector<BifurcationPoint> find_period_doubling(
    const HarmonicEngine& eng, int grid_points = 1024);

// Uniform-in-d table of both curves over the clipped domain (n_rows >= 2,
// endpoints included).
[[nodiscard]] CurveTable tabulate_curves(const ConverterConfig& cfg,
                                         const SeriesConfig& series,
                                         int n_rows);
[[nodiscard]] CurveTable tabulate_curves(const HarmonicEngine& eng,
                                         int n_rows);

} // namespace pdbuck
