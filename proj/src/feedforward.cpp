#include "pdbuck/feedforward.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace pdbuck {

namespace {

// Golden-section refinement of an extremum of f inside [a, b]; `sign` is +1
// to maximize and -1 to minimize. Returns {x, f(x)} with the bracket
// endpoints also considered, so boundary extrema are reported exactly.
std::pair<double, double> golden_refine(
    const std::function<double(double)>& f, double a, double b, double tol,
    double sign) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = sign * f(x1), f2 = sign * f(x2);
    double lo = a, hi = b;
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = sign * f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = sign * f(x1);
        }
    }
    double xm = 0.5 * (lo + hi);
    double fm = sign * f(xm);
    double best_x = xm, best_f = fm;
    for (double xe : {a, b}) {
        double fe = sign * f(xe);
        if (fe > best_f) {
            best_f = fe;
            best_x = xe;
        }
    }
    return {best_x, sign * best_f};
}

} // namespace

double h_of_d(const HarmonicEngine& eng, double d) {
    return 2.0 * eng.critical_sum(d);
}

double h_of_d(const ConverterConfig& cfg, double d,
              const SeriesConfig& series) {
    return h_of_d(HarmonicEngine(cfg, series), d);
}

HExtrema h_extrema(const HarmonicEngine& eng, int grid_points) {
    if (grid_points < 128)
        throw InvalidConfig("h_extrema: grid_points must be >= 128");
    const double lo = eng.domain_lo();
    const double hi = eng.domain_hi();
    const double tol = 1e-10 * eng.config().T;

    std::vector<double> xs(static_cast<size_t>(grid_points) + 1);
    std::vector<double> hs(xs.size());
    int i_max = 0, i_min = 0;
    for (int i = 0; i <= grid_points; ++i) {
        // Endpoint-exact grid (the naive formula can overshoot hi by an ulp).
        double d = i == grid_points ? hi : lo + (hi - lo) * i / grid_points;
        xs[static_cast<size_t>(i)] = d;
        hs[static_cast<size_t>(i)] = h_of_d(eng, d);
        if (hs[static_cast<size_t>(i)] > hs[static_cast<size_t>(i_max)])
            i_max = i;
        if (hs[static_cast<size_t>(i)] < hs[static_cast<size_t>(i_min)])
            i_min = i;
    }

    auto f = [&eng](double d) { return h_of_d(eng, d); };
    auto bracket = [&](int i) {
        double a = xs[static_cast<size_t>(std::max(i - 1, 0))];
        double b = xs[static_cast<size_t>(std::min(i + 1, grid_points))];
        return std::pair<double, double>{a, b};
    };

    HExtrema ext;
    {
        auto [a, b] = bracket(i_max);
        auto [x, v] = golden_refine(f, a, b, tol, +1.0);
        ext.d_at_max = x;
        ext.h_max = v;
    }
    {
        auto [a, b] = bracket(i_min);
        auto [x, v] = golden_refine(f, a, b, tol, -1.0);
        ext.d_at_min = x;
        ext.h_min = v;
    }
    return ext;
}

HExtrema h_extrema(const ConverterConfig& cfg, const SeriesConfig& series,
                   int grid_points) {
    return h_extrema(HarmonicEngine(cfg, series), grid_points);
}

bool prevents_bifurcation(const FeedforwardGains& gains, const HExtrema& ext) {
    double span = gains.kh - gains.kl;
    return span > ext.h_max || span < ext.h_min;
}

double duty_ratio(const ConverterConfig& cfg, double Vs) {
    cfg.validate();
    double G0 = eval(open_loop_tf(cfg), 0.0).real();
    double vl = cfg.ramp.lo(Vs);
    double vh = cfg.ramp.hi(Vs);
    double num = G0 * Vs - vl + cfg.g * cfg.Vr;
    double den = G0 * Vs - vl + vh;
    if (den == 0.0)
        throw DegenerateDenominator("duty_ratio: zero denominator");
    return num / den;
}

double average_output(const ConverterConfig& cfg, double Vs) {
    cfg.validate();
    if (Vs == 0.0)
        throw SingularParameter("average_output requires Vs != 0");
    double G0 = eval(open_loop_tf(cfg), 0.0).real();
    double kl = cfg.ramp.lo(Vs) / Vs;
    double kh = cfg.ramp.hi(Vs) / Vs;
    double den = G0 - kl + kh;
    if (den == 0.0)
        throw DegenerateDenominator("average_output: zero denominator");
    return (kh * Vs - cfg.g * cfg.Vr) / den;
}

DesignResult design_line_regulation(const ConverterConfig& cfg,
                                    double target_vo, const HExtrema& ext) {
    cfg.validate();
    if (target_vo == 0.0)
        throw SingularParameter("design_line_regulation requires target != 0");
    double G0 = eval(open_loop_tf(cfg), 0.0).real();
    DesignResult out;
    out.gains.kh = 0.0;
    out.gains.kl = G0 + cfg.g * cfg.Vr / target_vo;
    if (out.gains.kl == 0.0)
        throw InvalidConfig(
            "design_line_regulation: degenerate gains (kl = kh = 0)");
    out.prevented = prevents_bifurcation(out.gains, ext);
    return out;
}

} // namespace pdbuck
