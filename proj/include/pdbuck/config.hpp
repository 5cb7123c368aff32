#pragma once

#include <cmath>
#include <numbers>

#include "pdbuck/rational.hpp"

namespace pdbuck {

enum class Mode { VoltageMode, CurrentMode };

// T-periodic sawtooth h(t) = Vl + (Vh - Vl) * frac(t/T). Fixed ramps carry
// absolute endpoints; feedforward ramps scale them with the source voltage
// (Vl = kl*Vs, Vh = kh*Vs).
struct RampSpec {
    enum class Kind { Fixed, Feedforward };
    Kind kind = Kind::Fixed;
    double Vl = 0.0; // V (Fixed)
    double Vh = 0.0; // V (Fixed)
    double kl = 0.0; // dimensionless (Feedforward)
    double kh = 0.0; // dimensionless (Feedforward)

    static RampSpec fixed(double Vl, double Vh);
    static RampSpec feedforward(double kl, double kh);

    // Ramp endpoints for a given source voltage.
    [[nodiscard]] double lo(double Vs) const {
        return kind == Kind::Fixed ? Vl : kl * Vs;
    }
    [[nodiscard]] double hi(double Vs) const {
        return kind == Kind::Fixed ? Vh : kh * Vs;
    }
    // h(t) at time t within a period of length T.
    [[nodiscard]] double value(double t, double T, double Vs) const {
        double frac = t / T - std::floor(t / T);
        return lo(Vs) + (hi(Vs) - lo(Vs)) * frac;
    }
};

// All physical and control parameters of the closed-loop converter.
struct ConverterConfig {
    double L = 0.0;  // H
    double C = 0.0;  // F
    double R = 0.0;  // ohm (load)
    double Rc = 0.0; // ohm (capacitor ESR)
    double Rs = 0.0; // ohm (current-sense gain; CurrentMode only)
    double T = 0.0;  // s (switching period)
    double Vr = 0.0; // V (reference)
    double g = 0.0;  // dimensionless gain applied to Vr in y = g*Vr + G2*vo
    RationalFunction G2{{0.0}, {1.0}}; // error-amplifier transfer function
    Mode mode = Mode::VoltageMode;
    RampSpec ramp;

    [[nodiscard]] double omega_s() const { return 2.0 * std::numbers::pi / T; }

    // Throws InvalidConfig when an invariant is violated.
    void validate() const;
};

} // namespace pdbuck
