#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdbuck/detail/closed_sums.hpp"
#include "pdbuck/errors.hpp"

using namespace pdbuck;
using namespace pdbuck::detail;

namespace {

constexpr double kPi = std::numbers::pi;

// Compensated brute-force partial sums used as the oracle.
double brute_sin(int m, double x, long n) {
    Kahan acc;
    for (long k = 1; k <= n; ++k)
        acc.add(std::sin(k * x) / std::pow(static_cast<double>(k), m));
    return acc.value();
}

double brute_cos(int m, double x, long n) {
    Kahan acc;
    for (long k = 1; k <= n; ++k)
        acc.add(std::cos(k * x) / std::pow(static_cast<double>(k), m));
    return acc.value();
}

double brute_sin_odd(int m, double x, long n) {
    Kahan acc;
    for (long k = 1; k <= n; k += 2)
        acc.add(std::sin(k * x) / std::pow(static_cast<double>(k), m));
    return acc.value();
}

} // namespace

TEST_CASE("Bernoulli polynomials at known points") {
    CHECK(bernoulli_poly(0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bernoulli_poly(1, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(bernoulli_poly(2, 0.0) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(bernoulli_poly(3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bernoulli_poly(4, 0.0) ==
          doctest::Approx(-1.0 / 30.0).epsilon(1e-15));
    CHECK(bernoulli_poly(6, 0.0) ==
          doctest::Approx(1.0 / 42.0).epsilon(1e-15));
    CHECK(bernoulli_poly(8, 0.0) ==
          doctest::Approx(-1.0 / 30.0).epsilon(1e-15));
    // Symmetry B_m(1-u) = (-1)^m B_m(u).
    for (int m = 1; m <= 9; ++m) {
        double u = 0.37;
        CHECK(bernoulli_poly(m, 1.0 - u) ==
              doctest::Approx((m % 2 == 0 ? 1.0 : -1.0) *
                              bernoulli_poly(m, u))
                  .epsilon(1e-12));
    }
    CHECK_THROWS_AS(bernoulli_poly(10, 0.5), Error);
    CHECK_THROWS_AS(bernoulli_poly(-1, 0.5), Error);
}

TEST_CASE("zeta at even integers") {
    CHECK(zeta_even(2) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-15));
    CHECK(zeta_even(4) ==
          doctest::Approx(std::pow(kPi, 4) / 90.0).epsilon(1e-15));
    CHECK(zeta_even(6) ==
          doctest::Approx(std::pow(kPi, 6) / 945.0).epsilon(1e-15));
    CHECK(zeta_even(8) ==
          doctest::Approx(std::pow(kPi, 8) / 9450.0).epsilon(1e-15));
    CHECK_THROWS_AS(zeta_even(3), Error);
}

TEST_CASE("sine sums against brute force") {
    const long n = 2'000'000;
    for (double x : {0.3, 2.0, 5.9}) {
        CHECK(sin_sum(1, x) == doctest::Approx(brute_sin(1, x, n)).epsilon(1e-5));
        for (int m : {3, 5, 7, 9})
            CHECK(sin_sum(m, x) ==
                  doctest::Approx(brute_sin(m, x, n)).epsilon(1e-9));
    }
    // Closed form for the sawtooth: S(1, x) = (pi - x)/2 on (0, 2pi).
    CHECK(sin_sum(1, 1.0) == doctest::Approx((kPi - 1.0) / 2).epsilon(1e-14));
    // Jump midpoints.
    CHECK(sin_sum(1, 0.0) == 0.0);
    CHECK(sin_sum(1, 2.0 * kPi) == 0.0);
    CHECK(sin_sum(3, 0.0) == 0.0);
    // Periodicity and negative arguments.
    CHECK(sin_sum(3, 1.2) ==
          doctest::Approx(sin_sum(3, 1.2 + 2.0 * kPi)).epsilon(1e-12));
    CHECK(sin_sum(3, -1.2) == doctest::Approx(-sin_sum(3, 1.2)).epsilon(1e-12));
    CHECK_THROWS_AS(sin_sum(2, 1.0), Error);
}

TEST_CASE("cosine sums against brute force") {
    const long n = 2'000'000;
    for (double x : {0.3, 2.0, 5.9}) {
        CHECK(cos_sum(2, x) ==
              doctest::Approx(brute_cos(2, x, n)).epsilon(1e-5));
        for (int m : {4, 6, 8})
            CHECK(cos_sum(m, x) ==
                  doctest::Approx(brute_cos(m, x, n)).epsilon(1e-9));
    }
    CHECK(cos_sum(2, 0.0) == doctest::Approx(zeta_even(2)).epsilon(1e-15));
    CHECK(cos_sum(4, 2.0 * kPi) ==
          doctest::Approx(zeta_even(4)).epsilon(1e-12));
    // Alternating series at x = pi: sum (-1)^k/k^2 = -pi^2/12.
    CHECK(cos_sum(2, kPi) ==
          doctest::Approx(-kPi * kPi / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(cos_sum(3, 1.0), Error);
}

TEST_CASE("odd-harmonic sine sums") {
    const long n = 2'000'001;
    for (double x : {0.3, 2.0})
        CHECK(sin_sum_odd_only(3, x) ==
              doctest::Approx(brute_sin_odd(3, x, n)).epsilon(1e-9));
    // Leibniz: sum over odd q of sin(q pi/2)/q = pi/4.
    CHECK(sin_sum_odd_only(1, kPi / 2) ==
          doctest::Approx(kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("half-integer harmonic sums") {
    const long n = 2'000'000;
    Kahan acc;
    for (long k = 1; k <= n; ++k) acc.add(1.0 / std::pow(k - 0.5, 2));
    CHECK(half_harmonic_sum(2) == doctest::Approx(acc.value()).epsilon(1e-6));
    CHECK(half_harmonic_sum(2) ==
          doctest::Approx(kPi * kPi / 2.0).epsilon(1e-15));
    CHECK(half_harmonic_sum(4) ==
          doctest::Approx(15.0 * zeta_even(4)).epsilon(1e-15));
}

TEST_CASE("compensated accumulator") {
    Kahan acc;
    acc.add(1e16);
    acc.add(1.0);
    acc.add(-1e16);
    CHECK(acc.value() == doctest::Approx(1.0).epsilon(1e-15));

    // One million additions of 0.1 stay exact to double resolution.
    Kahan tenth;
    for (int i = 0; i < 1'000'000; ++i) tenth.add(0.1);
    CHECK(tenth.value() == doctest::Approx(100000.0).epsilon(1e-15));
}
