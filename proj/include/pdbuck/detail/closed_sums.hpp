#pragma once

#include <cmath>

// Closed forms for the trigonometric tail sums used by the accelerated series
// engine. With u = frac(x / 2pi) and B_m the Bernoulli polynomial:
//
//   sum_{k>=1} cos(kx)/k^m  (even m >= 2)
//   sum_{k>=1} sin(kx)/k^m  (odd  m >= 1)
//     = (-1)^(floor(m/2)+1) * (2pi)^m * B_m(u) / (2 * m!)
//
// Both are the 2pi-periodic extensions; at jump points the sine sums take the
// midpoint value (S(m, 0) = 0 for all odd m).
namespace pdbuck::detail {

// Bernoulli polynomial B_m(u), m in [0, 9].
[[nodiscard]] double bernoulli_poly(int m, double u);

// zeta(m) for even m in {2, 4, 6, 8}.
[[nodiscard]] double zeta_even(int m);

// sum_{k>=1} sin(k x) / k^m for odd m in {1, 3, 5, 7, 9}; any real x.
[[nodiscard]] double sin_sum(int m, double x);

// sum_{k>=1} cos(k x) / k^m for even m in {2, 4, 6, 8}; any real x.
[[nodiscard]] double cos_sum(int m, double x);

// sum over odd q >= 1 of sin(q x) / q^m  =  S(m, x) - 2^(-m) S(m, 2x).
[[nodiscard]] double sin_sum_odd_only(int m, double x);

// sum_{k>=1} (k - 1/2)^(-m) = (2^m - 1) zeta(m) for even m.
[[nodiscard]] double half_harmonic_sum(int m);

// Compensated (Kahan-Neumaier) accumulator for the numeric residual sums.
struct Kahan {
    double sum = 0.0;   // running primary sum
    double carry = 0.0; // accumulated compensation
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

} // namespace pdbuck::detail
