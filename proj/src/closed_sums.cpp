#include "pdbuck/detail/closed_sums.hpp"

#include <numbers>

#include "pdbuck/errors.hpp"

namespace pdbuck::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

double phase_frac(double x) {
    double u = x / kTwoPi;
    u -= std::floor(u);
    return u;
}

// (-1)^(floor(m/2)+1) (2pi)^m B_m(u) / (2 m!)
double bernoulli_form(int m, double u) {
    double sign = (m / 2) % 2 == 0 ? -1.0 : 1.0;
    return sign * std::pow(kTwoPi, m) * bernoulli_poly(m, u) /
           (2.0 * factorial(m));
}

} // namespace

double bernoulli_poly(int m, double u) {
    switch (m) {
        case 0: return 1.0;
        case 1: return u - 0.5;
        case 2: return (u - 1.0) * u + 1.0 / 6.0;
        case 3: return ((u - 1.5) * u + 0.5) * u;
        case 4: return ((u - 2.0) * u + 1.0) * u * u - 1.0 / 30.0;
        case 5: return (((u - 2.5) * u + 5.0 / 3.0) * u * u - 1.0 / 6.0) * u;
        case 6:
            return (((u - 3.0) * u + 2.5) * u * u - 0.5) * u * u + 1.0 / 42.0;
        case 7:
            return ((((u - 3.5) * u + 3.5) * u * u - 7.0 / 6.0) * u * u +
                    1.0 / 6.0) *
                   u;
        case 8:
            return ((((u - 4.0) * u + 14.0 / 3.0) * u * u - 7.0 / 3.0) * u * u +
                    2.0 / 3.0) *
                       u * u -
                   1.0 / 30.0;
        case 9:
            return (((((u - 4.5) * u + 6.0) * u * u - 21.0 / 5.0) * u * u +
                     2.0) *
                        u * u -
                    0.3) *
                   u;
        default:
            throw Error("bernoulli_poly: unsupported order");
    }
}

double zeta_even(int m) {
    switch (m) {
        case 2: return kPi * kPi / 6.0;
        case 4: return kPi * kPi * kPi * kPi / 90.0;
        case 6: return std::pow(kPi, 6) / 945.0;
        case 8: return std::pow(kPi, 8) / 9450.0;
        default:
            throw Error("zeta_even: unsupported order");
    }
}

double sin_sum(int m, double x) {
    if (m < 1 || m % 2 == 0) throw Error("sin_sum: odd order required");
    double u = phase_frac(x);
    // At the sawtooth jump the series converges to the midpoint, i.e. zero;
    // B_m(0) = 0 for odd m >= 3 but B_1(0) = -1/2 needs the explicit case.
    if (m == 1 && u == 0.0) return 0.0;
    return bernoulli_form(m, u);
}

double cos_sum(int m, double x) {
    if (m < 2 || m % 2 == 1) throw Error("cos_sum: even order required");
    return bernoulli_form(m, phase_frac(x));
}

double sin_sum_odd_only(int m, double x) {
    return sin_sum(m, x) - std::ldexp(sin_sum(m, 2.0 * x), -m);
}

double half_harmonic_sum(int m) {
    return (std::ldexp(1.0, m) - 1.0) * zeta_even(m);
}

} // namespace pdbuck::detail
