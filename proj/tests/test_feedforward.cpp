#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdbuck/feedforward.hpp"

using namespace pdbuck;

namespace {

ConverterConfig base_config() {
    ConverterConfig c;
    c.L = 20e-3;
    c.C = 47e-6;
    c.R = 22.0;
    c.Rc = 0.0;
    c.T = 400e-6;
    c.Vr = 11.3;
    c.g = -8.4;
    c.G2 = RationalFunction({8.4}, {1.0});
    c.mode = Mode::VoltageMode;
    c.ramp = RampSpec::fixed(3.8, 8.2);
    return c;
}

ConverterConfig feedforward_config() {
    ConverterConfig c = base_config();
    c.ramp = RampSpec::feedforward(-1.092, 0.0);
    return c;
}

} // namespace

TEST_CASE("H(d) against frozen values and the critical-curve identity") {
    ConverterConfig cfg = base_config();
    HarmonicEngine eng(cfg, SeriesConfig{});
    CHECK(h_of_d(eng, 1.3e-4) ==
          doctest::Approx(0.19753832976013433).epsilon(1e-11));

    // H(d) * Vs_critical(d) == Vh - Vl wherever the critical curve exists.
    double span = cfg.ramp.Vh - cfg.ramp.Vl;
    double lo = eng.domain_lo(), hi = eng.domain_hi();
    for (int i = 0; i < 16; ++i) {
        double d = lo + (hi - lo) * (i + 0.5) / 16.0;
        auto vs = vs_critical(eng, d);
        REQUIRE(vs.has_value());
        CHECK(h_of_d(eng, d) * *vs == doctest::Approx(span).epsilon(1e-12));
    }
}

TEST_CASE("extrema of H over the phase domain") {
    HarmonicEngine eng(base_config(), SeriesConfig{});
    HExtrema ext = h_extrema(eng);
    CHECK(ext.h_max == doctest::Approx(0.35798238048681535).epsilon(1e-10));
    CHECK(ext.h_min == doctest::Approx(0.17899816482020606).epsilon(1e-10));
    CHECK(ext.d_at_min ==
          doctest::Approx(1.9354229002214004e-4).epsilon(1e-6));
    // The maximum sits at the upper domain edge.
    CHECK(std::abs(ext.d_at_max - eng.domain_hi()) <
          1e-9 * eng.config().T);

    CHECK_THROWS_AS((void)h_extrema(eng, 64), InvalidConfig);
}

TEST_CASE("strict prevention condition") {
    HExtrema ext;
    ext.h_max = 0.358;
    ext.h_min = 0.179;

    CHECK(prevents_bifurcation({-0.5, 0.0}, ext));       // span above max
    CHECK(prevents_bifurcation({-0.05, 0.0}, ext));      // span below min
    CHECK_FALSE(prevents_bifurcation({-0.25, 0.0}, ext)); // inside the band
    // Equality with either extremum does not count as prevented.
    CHECK_FALSE(prevents_bifurcation({-ext.h_max, 0.0}, ext));
    CHECK_FALSE(prevents_bifurcation({-ext.h_min, 0.0}, ext));
    CHECK(prevents_bifurcation({-(ext.h_max + 1e-9), 0.0}, ext));
    CHECK(prevents_bifurcation({-(ext.h_min - 1e-9), 0.0}, ext));
}

TEST_CASE("low-frequency duty relation") {
    CHECK(duty_ratio(base_config(), 24.5) ==
          doctest::Approx(0.5094196003805899).epsilon(1e-13));
    // With the designed feedforward ramp the relation is scale-free in Vs.
    CHECK(duty_ratio(feedforward_config(), 28.0) ==
          doctest::Approx(0.6428571428571428).epsilon(1e-13));

    ConverterConfig degen = base_config();
    degen.ramp = RampSpec::fixed(4.2, 8.4);
    CHECK_THROWS_AS((void)duty_ratio(degen, -0.5), DegenerateDenominator);
}

TEST_CASE("average output prediction") {
    ConverterConfig ff = feedforward_config();
    for (double vs : {16.0, 24.0, 35.0})
        CHECK(average_output(ff, vs) == doctest::Approx(10.0).epsilon(1e-12));

    double vo = average_output(base_config(), 20.0);
    CHECK(vo > 11.9);
    CHECK(vo < 12.03);

    CHECK_THROWS_AS((void)average_output(base_config(), 0.0),
                    SingularParameter);
    ConverterConfig degen = base_config();
    degen.ramp = RampSpec::fixed(4.2, 8.4);
    CHECK_THROWS_AS((void)average_output(degen, -0.5),
                    DegenerateDenominator);
}

TEST_CASE("line-regulation design") {
    ConverterConfig cfg = base_config();
    HExtrema ext = h_extrema(cfg, SeriesConfig{});

    DesignResult res = design_line_regulation(cfg, 10.0, ext);
    CHECK(res.gains.kh == 0.0);
    CHECK(res.gains.kl == doctest::Approx(-1.092).epsilon(1e-12));
    // Same gain via kl = g1 (1 - Vr / target).
    CHECK(res.gains.kl ==
          doctest::Approx(8.4 * (1.0 - 11.3 / 10.0)).epsilon(1e-12));
    CHECK(res.prevented);

    // A target that lands the span inside [h_min, h_max] is not prevented.
    DesignResult inside = design_line_regulation(cfg, 94.92 / 8.65, ext);
    CHECK(inside.gains.kl == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK_FALSE(inside.prevented);

    CHECK_THROWS_AS(design_line_regulation(cfg, 0.0, ext), SingularParameter);

    // kl = 0 exactly (target equal to g Vr / G0) is degenerate.
    ConverterConfig unit = cfg;
    unit.g = -1.0;
    unit.Vr = 8.4;
    CHECK_THROWS_AS(design_line_regulation(unit, 1.0, ext), InvalidConfig);
}
