#include "pdbuck/bifurcation.hpp"

#include <algorithm>
#include <cmath>

namespace pdbuck {

namespace {

// F(d) = vs_period_one(d) - vs_critical(d); nullopt when either curve has no
// solution at d, which excludes the bracket from refinement.
std::optional<double> curve_gap(const HarmonicEngine& eng, double d) {
    auto a = vs_period_one(eng, d);
    auto b = vs_critical(eng, d);
    if (!a || !b) return std::nullopt;
    return *a - *b;
}

} // namespace

std::vector<BifurcationPoint> find_period_doubling(const HarmonicEngine& eng,
                                                   int grid_points) {
    if (grid_points < 64)
        throw InvalidConfig("find_period_doubling: grid_points must be >= 64");
    const auto& cfg = eng.config();
    if (cfg.ramp.kind != RampSpec::Kind::Fixed)
        throw InvalidConfig("find_period_doubling requires a fixed ramp");

    const double lo = eng.domain_lo();
    const double hi = eng.domain_hi();
    const double tol = 1e-12 * cfg.T;

    std::vector<BifurcationPoint> out;
    double d_prev = lo;
    std::optional<double> f_prev = curve_gap(eng, d_prev);
    for (int i = 1; i <= grid_points; ++i) {
        double d_cur = lo + (hi - lo) * i / grid_points;
        std::optional<double> f_cur = curve_gap(eng, d_cur);
        if (f_prev && f_cur &&
            ((*f_prev <= 0.0 && *f_cur > 0.0) ||
             (*f_prev > 0.0 && *f_cur <= 0.0))) {
            double a = d_prev, b = d_cur;
            double fa = *f_prev;
            while (b - a > tol) {
                double mid = 0.5 * (a + b);
                std::optional<double> fm = curve_gap(eng, mid);
                if (!fm) break; // curve lost inside the bracket: discard
                if ((fa <= 0.0) == (*fm <= 0.0)) {
                    a = mid;
                    fa = *fm;
                } else {
                    b = mid;
                }
            }
            if (b - a <= tol) {
                double d_star = 0.5 * (a + b);
                if (auto vs = vs_critical(eng, d_star)) {
                    out.push_back({*vs, d_star, 1.0 - d_star / cfg.T});
                }
            }
        }
        d_prev = d_cur;
        f_prev = f_cur;
    }

    std::sort(out.begin(), out.end(),
              [](const BifurcationPoint& x, const BifurcationPoint& y) {
                  return x.vs_star < y.vs_star;
              });
    return out;
}

std::vector<BifurcationPoint> find_period_doubling(const ConverterConfig& cfg,
                                                   const SeriesConfig& series,
                                                   int grid_points) {
    return find_period_doubling(HarmonicEngine(cfg, series), grid_points);
}

CurveTable tabulate_curves(const HarmonicEngine& eng, int n_rows) {
    if (n_rows < 2) throw InvalidConfig("tabulate_curves: n_rows must be >= 2");
    const double lo = eng.domain_lo();
    const double hi = eng.domain_hi();
    CurveTable table;
    table.rows.reserve(static_cast<size_t>(n_rows));
    for (int i = 0; i < n_rows; ++i) {
        // Endpoint-exact grid: the naive formula can overshoot hi by an ulp
        // for divisors that are not powers of two, leaving d outside the
        // clipped domain.
        double d = i == n_rows - 1 ? hi : lo + (hi - lo) * i / (n_rows - 1);
        table.rows.push_back({d, vs_period_one(eng, d), vs_critical(eng, d)});
    }
    return table;
}

CurveTable tabulate_curves(const ConverterConfig& cfg,
                           const SeriesConfig& series, int n_rows) {
    return tabulate_curves(HarmonicEngine(cfg, series), n_rows);
}

} // namespace pdbuck
