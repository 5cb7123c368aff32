#include "pdbuck/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pdbuck/errors.hpp"
#include "pdbuck/xfer.hpp"

namespace pdbuck {

namespace {

constexpr double kEventTol = 1e-13;   // s, comparator localization
constexpr int kMaxEventsPerStep = 4096;

struct Pair {
    double iL, vC;
};

// Core switched integrator. The comparator output is refreshed at every grid
// point and every localized crossing; vd is held constant in between.
class SwitchedRun {
  public:
    SwitchedRun(const ConverterConfig& cfg, double Vs, int steps_per_cycle)
        : cfg_(cfg), Vs_(Vs), steps_(steps_per_cycle) {
        cfg_.validate();
        if (cfg_.mode != Mode::VoltageMode)
            throw ModeMismatch("time-domain simulation supports voltage mode only");
        if (cfg_.G2.num_degree() != 0 || cfg_.G2.den_degree() != 0)
            throw ModeMismatch("time-domain simulation requires a constant G2");
        if (steps_ < 200)
            throw InvalidConfig("steps_per_cycle must be >= 200");
        g1_ = cfg_.G2.num_coeffs[0] / cfg_.G2.den_coeffs[0];
        lo_ = cfg_.ramp.lo(Vs_);
        span_ = cfg_.ramp.hi(Vs_) - lo_;
        dt_ = cfg_.T / steps_;
    }

    [[nodiscard]] double vo(const Pair& x) const {
        return cfg_.R * (x.vC + cfg_.Rc * x.iL) / (cfg_.R + cfg_.Rc);
    }
    [[nodiscard]] double y(const Pair& x) const {
        return cfg_.g * cfg_.Vr + g1_ * vo(x);
    }
    [[nodiscard]] double ramp(double frac) const { return lo_ + span_ * frac; }
    [[nodiscard]] double dt() const { return dt_; }

    // Runs n_cycles from x, invoking grid_cb(cycle, i, x, h, on) after the
    // comparator refresh at every grid point, including (0, 0) at start.
    // Grid point (cycle, steps_) is reported as (cycle + 1, 0).
    template <typename GridCb>
    void run(Pair& x, int n_cycles, GridCb&& grid_cb) {
        bool on = ramp(0.0) - y(x) > 0.0;
        grid_cb(0, 0, x, ramp(0.0), on);
        for (int cycle = 0; cycle < n_cycles; ++cycle) {
            for (int i = 0; i < steps_; ++i) {
                advance_step(x, cycle, i, on);
                int cyc = cycle, idx = i + 1;
                if (idx == steps_) {
                    ++cyc;
                    idx = 0;
                }
                double frac = static_cast<double>(idx) / steps_;
                double h = ramp(frac);
                on = h - y(x) > 0.0;
                grid_cb(cyc, idx, x, h, on);
            }
            if (!std::isfinite(x.iL) || !std::isfinite(x.vC) ||
                std::abs(x.iL) > 1e9 || std::abs(x.vC) > 1e9)
                throw NonFinite("simulation state diverged at cycle " +
                                std::to_string(cycle));
        }
    }

  private:
    [[nodiscard]] Pair rates(const Pair& x, double vd) const {
        double v = vo(x);
        return {(vd - v) / cfg_.L,
                (cfg_.R * x.iL - x.vC) / (cfg_.C * (cfg_.R + cfg_.Rc))};
    }

    [[nodiscard]] Pair rk4(const Pair& x, double vd, double h) const {
        Pair k1 = rates(x, vd);
        Pair k2 = rates({x.iL + 0.5 * h * k1.iL, x.vC + 0.5 * h * k1.vC}, vd);
        Pair k3 = rates({x.iL + 0.5 * h * k2.iL, x.vC + 0.5 * h * k2.vC}, vd);
        Pair k4 = rates({x.iL + h * k3.iL, x.vC + h * k3.vC}, vd);
        return {x.iL + h / 6.0 * (k1.iL + 2.0 * k2.iL + 2.0 * k3.iL + k4.iL),
                x.vC + h / 6.0 * (k1.vC + 2.0 * k2.vC + 2.0 * k3.vC + k4.vC)};
    }

    // One grid step with event localization; `on` is the comparator state at
    // the start of the step and is updated across internal crossings. The
    // sawtooth is continuous inside the step (wrap happens at grid points).
    void advance_step(Pair& x, int cycle, int i, bool& on) {
        (void)cycle;
        double a0 = 0.0;
        for (int events = 0;; ++events) {
            if (events > kMaxEventsPerStep)
                throw Error("comparator chatter exceeded the event budget");
            double vd = on ? Vs_ : 0.0;
            Pair trial = rk4(x, vd, (1.0 - a0) * dt_);
            double frac_end = (i + 1.0) / steps_;
            bool end_high = ramp(frac_end) - y(trial) > 0.0;
            if (end_high == on) {
                x = trial;
                return;
            }
            // Bisect the crossing in alpha (fraction of this grid step).
            double a = a0, b = 1.0;
            while ((b - a) * dt_ > kEventTol) {
                double m = 0.5 * (a + b);
                Pair xm = rk4(x, vd, (m - a0) * dt_);
                double frac_m = (i + m) / steps_;
                bool high = ramp(frac_m) - y(xm) > 0.0;
                if (high == on)
                    a = m;
                else
                    b = m;
            }
            x = rk4(x, vd, (b - a0) * dt_);
            a0 = b;
            on = ramp((i + a0) / steps_) - y(x) > 0.0;
            if (1.0 - a0 < 1e-12) return;
        }
    }

    ConverterConfig cfg_;
    double Vs_;
    int steps_;
    double g1_ = 0.0, lo_ = 0.0, span_ = 0.0, dt_ = 0.0;
};

void check_cycles(int n_cycles, int n_discard) {
    if (n_cycles < 1) throw InvalidConfig("n_cycles must be >= 1");
    if (n_discard < 0 || n_discard >= n_cycles)
        throw InvalidConfig("n_discard must lie in [0, n_cycles)");
}

// Stroboscopic samples plus the trapezoidal time average of vo over the
// retained cycles.
struct StrobeResult {
    StroboscopicSeries series;
    double mean_vo = 0.0;
};

StrobeResult run_strobe(const ConverterConfig& cfg, double Vs, int n_cycles,
                        int n_discard, int steps_per_cycle) {
    check_cycles(n_cycles, n_discard);
    SwitchedRun run(cfg, Vs, steps_per_cycle);
    StrobeResult out;
    out.series.discarded = n_discard;
    out.series.cycle_samples.reserve(
        static_cast<size_t>(n_cycles - n_discard));

    double area = 0.0;
    double prev_vo = 0.0;
    bool have_prev = false;
    Pair x{0.0, 0.0};
    run.run(x, n_cycles, [&](int cycle, int idx, const Pair& s, double, bool) {
        if (cycle > n_discard && idx == 0)
            out.series.cycle_samples.push_back({cycle - 1, run.vo(s), s.iL});
        if (cycle >= n_discard) { // retained window [n_discard T, n_cycles T]
            double v = run.vo(s);
            if (have_prev) area += 0.5 * (prev_vo + v) * run.dt();
            prev_vo = v;
            have_prev = true;
        }
    });
    out.mean_vo = area / ((n_cycles - n_discard) * cfg.T);
    return out;
}

int thread_budget(int n_jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw == 0 ? 1 : static_cast<int>(hw);
    if (const char* env = std::getenv("PDBUCK_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 1024) n = static_cast<int>(v);
    }
    return std::max(1, std::min(n, n_jobs));
}

} // namespace

SimTrace simulate(const ConverterConfig& cfg, double Vs, int n_cycles,
                  const SimState& init, int steps_per_cycle) {
    if (n_cycles < 1) throw InvalidConfig("n_cycles must be >= 1");
    SwitchedRun run(cfg, Vs, steps_per_cycle);
    SimTrace trace;
    trace.dt_nominal = run.dt();
    trace.samples.reserve(
        static_cast<size_t>(n_cycles) * static_cast<size_t>(steps_per_cycle) +
        1);
    Pair x{init.iL, init.vC};
    run.run(x, n_cycles,
            [&](int cycle, int idx, const Pair& s, double h, bool on) {
                double t = init.t +
                           (cycle + static_cast<double>(idx) / steps_per_cycle) *
                               cfg.T;
                double v = run.vo(s);
                trace.samples.push_back({t, s.iL, s.vC, v, run.y(s), h,
                                         on ? Vs : 0.0});
            });
    return trace;
}

StroboscopicSeries stroboscope(const ConverterConfig& cfg, double Vs,
                               int n_cycles, int n_discard,
                               int steps_per_cycle) {
    return run_strobe(cfg, Vs, n_cycles, n_discard, steps_per_cycle).series;
}

double steady_mean_vo(const ConverterConfig& cfg, double Vs, int n_cycles,
                      int n_discard, int steps_per_cycle) {
    return run_strobe(cfg, Vs, n_cycles, n_discard, steps_per_cycle).mean_vo;
}

namespace {

double window_max(const std::vector<double>& r, size_t lo, size_t hi) {
    double m = 0.0;
    for (size_t k = lo; k < hi; ++k) m = std::max(m, r[k]);
    return m;
}

// True when the residual sequence either ends below tol or is decaying
// geometrically toward a limit below tol. Near the bifurcation point the
// transient toward a period-p orbit decays arbitrarily slowly, so a finite
// window can legitimately end with residuals above tol; the envelope of a
// linear transient is geometric, and Aitken's delta-squared on the quarter
// maxima recovers its limit exactly for r_k = L + c*q^k. Irregular signals
// are rejected by the monotone-ratio gate and by the requirement that the
// extrapolated limit lands within tol of zero.
bool residual_vanishes(const std::vector<double>& r, double tol) {
    size_t q = r.size() / 4;
    if (window_max(r, r.size() - q, r.size()) < tol) return true;
    double b1 = window_max(r, 0, q);
    double b2 = window_max(r, q, 2 * q);
    double b3 = window_max(r, 2 * q, 3 * q);
    double b4 = window_max(r, 3 * q, r.size());
    if (!(b2 < 0.95 * b1 && b3 < 0.95 * b2 && b4 < 0.95 * b3)) return false;
    double denom = b2 + b4 - 2.0 * b3;
    if (!(denom > 0.0)) return false;
    return std::abs((b2 * b4 - b3 * b3) / denom) < tol;
}

} // namespace

PeriodClass classify_period(const StroboscopicSeries& series, double tol) {
    if (!(tol > 0.0)) throw InvalidConfig("classification tol must be > 0");
    const auto& s = series.cycle_samples;
    if (s.size() < 16)
        throw InsufficientSamples(
            "classify_period requires >= 16 retained samples");
    for (int p : {1, 2, 4}) {
        std::vector<double> r;
        r.reserve(s.size() - static_cast<size_t>(p));
        for (size_t k = 0; k + static_cast<size_t>(p) < s.size(); ++k)
            r.push_back(std::abs(s[k + static_cast<size_t>(p)].vo - s[k].vo));
        if (residual_vanishes(r, tol))
            return p == 1 ? PeriodClass::P1
                          : (p == 2 ? PeriodClass::P2 : PeriodClass::P4);
    }
    return PeriodClass::Higher;
}

std::vector<DiagramRow> bifurcation_diagram(const ConverterConfig& cfg,
                                            double vs_min, double vs_max,
                                            int n_points, int n_cycles,
                                            int n_discard, int steps_per_cycle,
                                            double class_tol) {
    if (n_points < 1) throw InvalidConfig("diagram needs n_points >= 1");
    if (n_points == 1) {
        if (!(vs_min <= vs_max))
            throw InvalidConfig("diagram needs vs_min <= vs_max");
    } else if (!(vs_min < vs_max)) {
        throw InvalidConfig("diagram needs vs_min < vs_max");
    }
    check_cycles(n_cycles, n_discard);

    std::vector<DiagramRow> rows(static_cast<size_t>(n_points));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;

    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_points) return;
            try {
                // Endpoint-exact grid (the naive formula can overshoot the
                // upper endpoint by an ulp).
                double Vs =
                    n_points == 1 || i == n_points - 1
                        ? (i == 0 ? vs_min : vs_max)
                        : vs_min + (vs_max - vs_min) * i / (n_points - 1);
                StrobeResult r = run_strobe(cfg, Vs, n_cycles, n_discard,
                                            steps_per_cycle);
                DiagramRow& row = rows[static_cast<size_t>(i)];
                row.Vs = Vs;
                row.vo_samples.reserve(r.series.cycle_samples.size());
                for (const auto& cs : r.series.cycle_samples)
                    row.vo_samples.push_back(cs.vo);
                row.cls = classify_period(r.series, class_tol);
                row.mean_vo = r.mean_vo;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int n_threads = thread_budget(n_points);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

std::optional<double> onset_voltage(const ConverterConfig& cfg,
                                    const std::vector<DiagramRow>& diagram,
                                    int n_cycles, int n_discard,
                                    int steps_per_cycle, double class_tol) {
    // The onset is the lower edge of the contiguous non-period-1 block at
    // the top of the sweep. Isolated non-period-1 rows below it stem from
    // coexisting attractors reached from the fixed initial state, not from
    // the loss of stability of the period-one orbit, so they are skipped.
    size_t j = diagram.size();
    while (j > 0 && diagram[j - 1].cls != PeriodClass::P1) --j;
    if (j == diagram.size()) return std::nullopt;
    if (j == 0) return diagram[0].Vs;

    double a = diagram[j - 1].Vs;
    double b = diagram[j].Vs;
    for (int iter = 0; iter < 8; ++iter) {
        double mid = 0.5 * (a + b);
        StroboscopicSeries s =
            stroboscope(cfg, mid, n_cycles, n_discard, steps_per_cycle);
        if (classify_period(s, class_tol) == PeriodClass::P1)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

} // namespace pdbuck
