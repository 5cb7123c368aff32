#pragma once

#include <complex>
#include <vector>

#include "pdbuck/errors.hpp"

namespace pdbuck {

// Real-coefficient ratio of polynomials in s, stored as ascending-power
// coefficient lists. Degree of either polynomial is capped at 16.
struct RationalFunction {
    std::vector<double> num_coeffs; // ascending powers of s
    std::vector<double> den_coeffs; // ascending powers of s

    RationalFunction() : num_coeffs{0.0}, den_coeffs{1.0} {}
    RationalFunction(std::vector<double> num, std::vector<double> den);

    [[nodiscard]] int num_degree() const;
    [[nodiscard]] int den_degree() const;

    // deg(num) < deg(den) after trailing-zero trimming.
    [[nodiscard]] bool strictly_proper() const;
};

// num(s)/den(s) by Horner evaluation in complex double arithmetic.
// Throws PoleHit when den(s) evaluates to exactly zero.
[[nodiscard]] std::complex<double> eval(const RationalFunction& rf,
                                        std::complex<double> s);

[[nodiscard]] RationalFunction rf_scale(const RationalFunction& a, double k);
[[nodiscard]] RationalFunction rf_mul(const RationalFunction& a,
                                      const RationalFunction& b);
// a - b over the common denominator; no pole/zero cancellation attempted.
[[nodiscard]] RationalFunction rf_sub(const RationalFunction& a,
                                      const RationalFunction& b);

// Coefficients a_m of the high-frequency expansion
//   rf(s) = sum_{m=1..M} a_m s^(-m) + O(s^(-M-1)).
// Requires a strictly proper rf (throws InvalidConfig otherwise); obtained by
// series division of the reversed numerator by the reversed denominator.
// Returned vector has size M+1 with index m holding a_m (index 0 unused = 0).
[[nodiscard]] std::vector<double> asymptotic_coefficients(
    const RationalFunction& rf, int order);

} // namespace pdbuck
