#include "pdbuck/harmonic.hpp"

#include <cmath>
#include <numbers>

#include "pdbuck/detail/closed_sums.hpp"

namespace pdbuck {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kAsymOrder = 8;
constexpr double kDomainClip = 1e-6;

// Re G(j nu) ~ sum_{even m} a_m sigma_m nu^-m, sigma_m = (-1)^(m/2);
// Im G(j nu) ~ sum_{odd m} a_m tau_m nu^-m, tau_m = -(-1)^((m-1)/2).
double sigma(int m) { return (m / 2) % 2 == 0 ? 1.0 : -1.0; }
double tau(int m) { return ((m - 1) / 2) % 2 == 0 ? -1.0 : 1.0; }

void require_fixed_ramp(const ConverterConfig& cfg, const char* op) {
    if (cfg.ramp.kind != RampSpec::Kind::Fixed)
        throw InvalidConfig(std::string(op) + " requires a fixed ramp");
}

double ramp_height(const ConverterConfig& cfg) {
    return cfg.ramp.Vh - cfg.ramp.Vl;
}

} // namespace

void SeriesConfig::validate() const {
    if (n_terms < 8) throw InvalidConfig("series n_terms must be >= 8");
    if (!(rel_tol > 0.0) || !(rel_tol < 1e-3))
        throw InvalidConfig("series rel_tol must lie in (0, 1e-3)");
}

HarmonicEngine::HarmonicEngine(const ConverterConfig& cfg,
                               const SeriesConfig& series)
    : cfg_(cfg), series_(series) {
    cfg_.validate();
    series_.validate();
    G_ = open_loop_tf(cfg_);
    if (!G_.strictly_proper())
        throw InvalidConfig(
            "harmonic analysis requires a strictly proper loop transfer "
            "function (check g2_num/g2_den degrees)");
    w_ = cfg_.omega_s();
    G0_ = eval(G_, 0.0).real();
    asym_ = asymptotic_coefficients(G_, kAsymOrder);

    int n = series_.n_terms;
    res_k_.resize(static_cast<size_t>(n) + 1);
    res_h_.resize(static_cast<size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
        double nu_k = k * w_;
        double nu_h = (k - 0.5) * w_;
        res_k_[static_cast<size_t>(k)] =
            eval(G_, {0.0, nu_k}) - tail_fit(nu_k);
        res_h_[static_cast<size_t>(k)] =
            eval(G_, {0.0, nu_h}) - tail_fit(nu_h);
    }
}

std::complex<double> HarmonicEngine::tail_fit(double nu) const {
    // sum_m a_m (j nu)^-m accumulated from the smallest term upward.
    double re = 0.0, im = 0.0;
    for (int m = kAsymOrder; m >= 1; --m) {
        double term = asym_[static_cast<size_t>(m)] / std::pow(nu, m);
        if (m % 2 == 0)
            re += sigma(m) * term;
        else
            im += tau(m) * term;
    }
    return {re, im};
}

double HarmonicEngine::domain_lo() const { return kDomainClip * cfg_.T; }

double HarmonicEngine::domain_hi() const {
    return (1.0 - kDomainClip) * cfg_.T;
}

void HarmonicEngine::require_in_domain(double d) const {
    if (!(d >= domain_lo() && d <= domain_hi()))
        throw DomainError("switching phase d outside the clipped domain");
}

double HarmonicEngine::period_one_denominator(double d) const {
    require_in_domain(d);
    double theta = w_ * d;

    detail::Kahan acc;
    for (int n = 1; n <= series_.n_terms; ++n) {
        const auto& r = res_k_[static_cast<size_t>(n)];
        double c = std::cos(n * theta), s = std::sin(n * theta);
        acc.add(((1.0 - c) * r.imag() - s * r.real()) / n);
    }

    double tail = 0.0;
    for (int m = 1; m <= kAsymOrder; ++m) {
        double am = asym_[static_cast<size_t>(m)];
        if (am == 0.0) continue;
        double scale = am / std::pow(w_, m);
        if (m % 2 == 1)
            tail += tau(m) * scale *
                    (detail::zeta_even(m + 1) - detail::cos_sum(m + 1, theta));
        else
            tail -= sigma(m) * scale * detail::sin_sum(m + 1, theta);
    }

    return (1.0 - d / cfg_.T) * G0_ + (acc.value() + tail) / kPi;
}

double HarmonicEngine::critical_sum(double d) const {
    require_in_domain(d);
    double theta = w_ * d;

    detail::Kahan acc;
    for (int k = 1; k <= series_.n_terms; ++k) {
        const auto& rk = res_k_[static_cast<size_t>(k)];
        const auto& rh = res_h_[static_cast<size_t>(k)];
        double c = std::cos(k * theta), s = std::sin(k * theta);
        acc.add(-rh.real() + (1.0 - c) * rk.real() + s * rk.imag());
    }

    double tail = 0.0;
    for (int m = 1; m <= kAsymOrder; ++m) {
        double am = asym_[static_cast<size_t>(m)];
        if (am == 0.0) continue;
        double scale = am / std::pow(w_, m);
        if (m % 2 == 0)
            tail += sigma(m) * scale *
                    (detail::zeta_even(m) - detail::cos_sum(m, theta) -
                     detail::half_harmonic_sum(m));
        else
            tail += tau(m) * scale * detail::sin_sum(m, theta);
    }

    return acc.value() + tail;
}

double HarmonicEngine::phase_sum(double phase) const {
    detail::Kahan acc;
    for (int n = 1; n <= series_.n_terms; ++n) {
        const auto& r = res_k_[static_cast<size_t>(n)];
        double c = std::cos(n * phase), s = std::sin(n * phase);
        acc.add((s * r.real() + c * r.imag()) / n);
    }

    double tail = 0.0;
    for (int m = 1; m <= kAsymOrder; ++m) {
        double am = asym_[static_cast<size_t>(m)];
        if (am == 0.0) continue;
        double scale = am / std::pow(w_, m);
        if (m % 2 == 0)
            tail += sigma(m) * scale * detail::sin_sum(m + 1, phase);
        else
            tail += tau(m) * scale * detail::cos_sum(m + 1, phase);
    }

    return acc.value() + tail;
}

double HarmonicEngine::period_two_sum(double d, double delta) const {
    require_in_domain(d);
    double theta = w_ * d;
    double phi = w_ * delta;
    double psi_p = phi + theta;
    double psi_m = phi - theta;

    detail::Kahan acc;
    for (int k = 1; k <= series_.n_terms; ++k) {
        const auto& rk = res_k_[static_cast<size_t>(k)];
        const auto& rh = res_h_[static_cast<size_t>(k)];
        double t = 0.0;
        t -= std::sin((2 * k - 1) * phi) * rh.real() / (2 * k - 1);
        t += std::sin(2 * k * phi) * rk.real() / (2 * k);
        double re_rot =
            std::cos(k * theta) * rk.real() - std::sin(k * theta) * rk.imag();
        t -= std::sin(k * phi) * re_rot / k;
        acc.add(t);
    }

    double tail = 0.0;
    for (int m = 1; m <= kAsymOrder; ++m) {
        double am = asym_[static_cast<size_t>(m)];
        if (am == 0.0) continue;
        if (m % 2 == 0) {
            double half_scale = am * sigma(m) / std::pow(0.5 * w_, m);
            double scale = am * sigma(m) / std::pow(w_, m);
            tail -= half_scale * detail::sin_sum_odd_only(m + 1, phi);
            tail += 0.5 * scale * detail::sin_sum(m + 1, 2.0 * phi);
            tail -= 0.5 * scale *
                    (detail::sin_sum(m + 1, psi_p) +
                     detail::sin_sum(m + 1, psi_m));
        } else {
            double scale = am * tau(m) / std::pow(w_, m);
            tail += 0.5 * scale *
                    (detail::cos_sum(m + 1, psi_m) -
                     detail::cos_sum(m + 1, psi_p));
        }
    }

    return acc.value() + tail;
}

// --- free-function operations -------------------------------------------

std::optional<double> vs_period_one(const HarmonicEngine& eng, double d) {
    const auto& cfg = eng.config();
    require_fixed_ramp(cfg, "vs_period_one");
    double den = eng.period_one_denominator(d);
    if (!(den > 0.0)) return std::nullopt;
    double h_at_d = cfg.ramp.Vl + ramp_height(cfg) * (d / cfg.T);
    double vs = (h_at_d - cfg.g * cfg.Vr) / den;
    if (!(vs > 0.0)) return std::nullopt;
    return vs;
}

std::optional<double> vs_period_one(const ConverterConfig& cfg, double d,
                                    const SeriesConfig& series) {
    return vs_period_one(HarmonicEngine(cfg, series), d);
}

double y_steady_state(const HarmonicEngine& eng, double Vs, double d,
                      double t) {
    const auto& cfg = eng.config();
    eng.require_in_domain(d);
    double w = cfg.omega_s();
    double dc = cfg.g * cfg.Vr + Vs * (1.0 - d / cfg.T) * eng.dc_gain();
    return dc +
           Vs / kPi * (eng.phase_sum(w * (t - d)) - eng.phase_sum(w * t));
}

double y_steady_state(const ConverterConfig& cfg, double Vs, double d,
                      double t, const SeriesConfig& series) {
    return y_steady_state(HarmonicEngine(cfg, series), Vs, d, t);
}

std::optional<double> vs_critical(const HarmonicEngine& eng, double d) {
    const auto& cfg = eng.config();
    require_fixed_ramp(cfg, "vs_critical");
    double den = eng.critical_sum(d);
    if (!(den > 0.0)) return std::nullopt;
    return 0.5 * ramp_height(cfg) / den;
}

std::optional<double> vs_critical(const ConverterConfig& cfg, double d,
                                  const SeriesConfig& series) {
    return vs_critical(HarmonicEngine(cfg, series), d);
}

std::optional<double> vs_period_two(const HarmonicEngine& eng,
                                    const PeriodTwoPoint& pt) {
    const auto& cfg = eng.config();
    require_fixed_ramp(cfg, "vs_period_two");
    if (pt.delta == 0.0)
        throw DegenerateDelta("vs_period_two requires delta != 0");
    if (!(std::abs(pt.delta) < 0.5 * cfg.T))
        throw DomainError("period-two delta must satisfy |delta| < T/2");
    double den = eng.period_two_sum(pt.d, pt.delta) / kPi;
    if (!(den > 0.0) && pt.delta > 0.0) return std::nullopt;
    if (!(den < 0.0) && pt.delta < 0.0) return std::nullopt;
    return pt.delta * ramp_height(cfg) / (cfg.T * den);
}

std::optional<double> vs_period_two(const ConverterConfig& cfg,
                                    const PeriodTwoPoint& pt,
                                    const SeriesConfig& series) {
    return vs_period_two(HarmonicEngine(cfg, series), pt);
}

std::complex<double> fourier_coeffs_period_two(int n,
                                               const ConverterConfig& cfg,
                                               double Vs,
                                               const PeriodTwoPoint& pt) {
    if (n == 0) throw DomainError("fourier_coeffs_period_two: n must be != 0");
    double w = cfg.omega_s();
    std::complex<double> j(0.0, 1.0);
    if (n % 2 != 0) {
        return Vs / (n * kPi) * std::exp(-j * (n * w * pt.d / 2.0)) *
               std::sin(n * w * pt.delta / 2.0);
    }
    return Vs / (j * static_cast<double>(n) * kPi) *
           (std::exp(-j * (n * w * pt.d / 2.0)) *
                std::cos(n * w * pt.delta / 2.0) -
            std::exp(-j * (n * w * cfg.T / 2.0)));
}

std::optional<double> estimate_vs_critical(const ConverterConfig& cfg) {
    cfg.validate();
    require_fixed_ramp(cfg, "estimate_vs_critical");
    RationalFunction G = open_loop_tf(cfg);
    double w = cfg.omega_s();
    double den = (eval(G, {0.0, w}) - eval(G, {0.0, 0.5 * w})).real();
    if (!(den > 0.0)) return std::nullopt;
    return 0.5 * ramp_height(cfg) / den;
}

namespace {

void check_much_less(std::vector<std::string>& warnings, double lhs,
                     double rhs, const std::string& what) {
    if (!(lhs * 10.0 <= rhs))
        warnings.push_back("validity condition " + what +
                           " is not well satisfied");
}

} // namespace

ApproxResult approx_vs_critical_voltage_mode(const ConverterConfig& cfg,
                                             double g1) {
    cfg.validate();
    require_fixed_ramp(cfg, "approx_vs_critical_voltage_mode");
    if (g1 == 0.0) throw SingularParameter("g1 must be nonzero");
    double w = cfg.omega_s();
    ApproxResult out;
    out.value = ramp_height(cfg) / (6.0 * g1) * ((cfg.R + cfg.Rc) / cfg.R) *
                cfg.L * cfg.C * w * w;
    check_much_less(out.warnings, 1.0 / std::sqrt(cfg.L * cfg.C), w,
                    "1/sqrt(LC) << w_s");
    check_much_less(out.warnings, cfg.Rc, cfg.R, "Rc << R");
    check_much_less(out.warnings, cfg.Rc * cfg.C, cfg.T, "Rc*C << T");
    return out;
}

ApproxResult approx_critical_gain(const ConverterConfig& cfg, double Vs) {
    cfg.validate();
    require_fixed_ramp(cfg, "approx_critical_gain");
    if (Vs == 0.0) throw SingularParameter("Vs must be nonzero");
    double w = cfg.omega_s();
    ApproxResult out;
    out.value = ramp_height(cfg) / (6.0 * Vs) * ((cfg.R + cfg.Rc) / cfg.R) *
                cfg.L * cfg.C * w * w;
    check_much_less(out.warnings, 1.0 / std::sqrt(cfg.L * cfg.C), w,
                    "1/sqrt(LC) << w_s");
    check_much_less(out.warnings, cfg.Rc, cfg.R, "Rc << R");
    check_much_less(out.warnings, cfg.Rc * cfg.C, cfg.T, "Rc*C << T");
    return out;
}

ApproxResult approx_vs_critical_current_mode(const ConverterConfig& cfg) {
    cfg.validate();
    require_fixed_ramp(cfg, "approx_vs_critical_current_mode");
    if (cfg.mode != Mode::CurrentMode)
        throw ModeMismatch("approx_vs_critical_current_mode requires current mode");
    if (cfg.Rc == 0.0)
        throw SingularParameter("current-mode approximation is singular at Rc = 0");
    double w = cfg.omega_s();
    ApproxResult out;
    out.value = ramp_height(cfg) / (6.0 * cfg.Rs) *
                ((cfg.R + cfg.Rc) / (cfg.R * cfg.Rc)) * cfg.L * cfg.L * w * w;
    check_much_less(out.warnings, 1.0 / std::sqrt(cfg.L * cfg.C), w,
                    "1/sqrt(LC) << w_s");
    check_much_less(out.warnings, cfg.Rc / cfg.L, w, "Rc/L << w_s");
    check_much_less(out.warnings, 1.0 / (cfg.R * cfg.C), w, "1/(RC) << w_s");
    return out;
}

} // namespace pdbuck
