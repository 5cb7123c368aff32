#pragma once

#include <optional>
#include <vector>

#include "pdbuck/config.hpp"

namespace pdbuck {

struct SimState {
    double iL = 0.0; // A
    double vC = 0.0; // V (capacitor internal voltage; vo = R(vC + Rc iL)/(R+Rc))
    double t = 0.0;  // s
};

struct SimTrace {
    struct Sample {
        double t, iL, vC, vo, y, h, vd;
    };
    std::vector<Sample> samples;
    double dt_nominal = 0.0; // s
};

struct StroboscopicSeries {
    struct Sample {
        int cycle;  // 0-based cycle index; state sampled at t = (cycle+1) T
        double vo;  // V
        double iL;  // A
    };
    std::vector<Sample> cycle_samples;
    int discarded = 0;
};

enum class PeriodClass { P1, P2, P4, Higher };

struct DiagramRow {
    double Vs = 0.0;
    std::vector<double> vo_samples; // retained stroboscopic vo values
    PeriodClass cls = PeriodClass::P1;
    double mean_vo = 0.0; // time-averaged vo over the retained cycles
};

// Switched time-domain integration of the voltage-mode buck converter with a
// constant-gain error amplifier (y = g Vr + g1 vo). Fourth-order fixed-step
// integration aligned to cycle boundaries; vd is piecewise constant and every
// comparator sign change is localized by bisection on (h - y) to 1e-13 s.
// vd = Vs iff h(t) - y(t) > 0. steps_per_cycle >= 200.
// Throws ModeMismatch for non-voltage-mode or dynamic-G2 configs, NonFinite
// if the state diverges.
[[nodiscard]] SimTrace simulate(const ConverterConfig& cfg, double Vs,
                                int n_cycles, const SimState& init,
                                int steps_per_cycle = 2000);

// Runs simulate from (0, 0), sampling the state at integer multiples of T
// (end of each cycle) and discarding the first n_discard cycles.
[[nodiscard]] StroboscopicSeries stroboscope(const ConverterConfig& cfg,
                                             double Vs, int n_cycles,
                                             int n_discard,
                                             int steps_per_cycle = 2000);

// Time-averaged vo over the retained cycles of the same run.
[[nodiscard]] double steady_mean_vo(const ConverterConfig& cfg, double Vs,
                                    int n_cycles, int n_discard,
                                    int steps_per_cycle = 2000);

// Smallest p in {1, 2, 4} with |vo_{k+p} - vo_k| < tol for all retained k;
// Higher when none qualifies. Requires >= 16 retained samples.
[[nodiscard]] PeriodClass classify_period(const StroboscopicSeries& series,
                                          double tol = 1e-4);

// Uniform Vs sweep of stroboscope + classify_period. Parallelized over sweep
// points (bounded by PDBUCK_THREADS when set); output order is deterministic.
[[nodiscard]] std::vector<DiagramRow> bifurcation_diagram(
    const ConverterConfig& cfg, double vs_min, double vs_max, int n_points,
    int n_cycles, int n_discard, int steps_per_cycle = 2000,
    double class_tol = 1e-4);

// Smallest Vs whose class is not P1, refined by up to 8 bisection
// re-simulations between the last P1 and first non-P1 grid points.
// nullopt when every row is P1.
[[nodiscard]] std::optional<double> onset_voltage(
    const ConverterConfig& cfg, const std::vector<DiagramRow>& diagram,
    int n_cycles, int n_discard, int steps_per_cycle = 2000,
    double class_tol = 1e-4);

} // namespace pdbuck
