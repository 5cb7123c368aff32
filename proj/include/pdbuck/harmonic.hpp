#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pdbuck/config.hpp"
#include "pdbuck/xfer.hpp"

namespace pdbuck {

// Truncation and convergence policy for the harmonic series.
struct SeriesConfig {
    int n_terms = 4096;    // >= 8
    double rel_tol = 1e-9; // in (0, 1e-3); doubling-check tolerance
    void validate() const;
};

// One candidate point on a period-two orbit: switching phase d within the
// first half-cycle plus the perturbation delta of the second half-cycle.
struct PeriodTwoPoint {
    double d = 0.0;     // s, in (0, T)
    double delta = 0.0; // s, |delta| < T/2
};

// Closed-form approximation result with validity warnings (the asymptotic
// conditions are reported, never enforced).
struct ApproxResult {
    double value = 0.0;
    std::vector<std::string> warnings;
};

// Precomputes G(j k w), G(j (k-1/2) w) and the high-frequency expansion of G
// once per configuration, then evaluates every series of the analysis with
// the numeric part reduced to a fast-decaying residual plus Bernoulli-form
// tail sums. All evaluators are const and safe to call concurrently.
class HarmonicEngine {
  public:
    HarmonicEngine(const ConverterConfig& cfg, const SeriesConfig& series);

    // Denominator of the period-one balance:
    //   (1 - d/T) G(0) + (1/pi) sum_{n>=1} Im[(1 - e^{j n w d}) G(j n w)] / n
    [[nodiscard]] double period_one_denominator(double d) const;

    // sum_{k>=1} Re[ -G(j (k-1/2) w) + (1 - e^{j k w d}) G(j k w) ].
    [[nodiscard]] double critical_sum(double d) const;

    // sum_{n>=1} Im[e^{j n phase} G(j n w)] / n  (building block of y(t)).
    [[nodiscard]] double phase_sum(double phase) const;

    // Re of the period-two balance bracket at (d, delta):
    //   -sum_k G(j(k-1/2)w) sin((2k-1) w delta) / (2k-1)
    //   +sum_k G(j k w) (sin(2k w delta) - 2 e^{j k w d} sin(k w delta)) / (2k)
    [[nodiscard]] double period_two_sum(double d, double delta) const;

    [[nodiscard]] const ConverterConfig& config() const { return cfg_; }
    [[nodiscard]] const SeriesConfig& series() const { return series_; }
    [[nodiscard]] double dc_gain() const { return G0_; }

    // Clipped switching-phase domain [1e-6 T, (1 - 1e-6) T].
    [[nodiscard]] double domain_lo() const;
    [[nodiscard]] double domain_hi() const;
    // Throws DomainError when d is outside the clipped domain.
    void require_in_domain(double d) const;

  private:
    ConverterConfig cfg_;
    SeriesConfig series_;
    RationalFunction G_;
    double w_ = 0.0;
    double G0_ = 0.0;
    std::vector<double> asym_;                  // a_m, m = 1..order
    std::vector<std::complex<double>> res_k_;   // G(j k w) minus its tail fit
    std::vector<std::complex<double>> res_h_;   // same at (k - 1/2) w

    [[nodiscard]] std::complex<double> tail_fit(double nu) const;
};

// Period-one balance: Vs required to switch at phase d (fixed ramp).
// nullopt when the relation has a nonpositive denominator or nonpositive Vs.
[[nodiscard]] std::optional<double> vs_period_one(const ConverterConfig& cfg,
                                                  double d,
                                                  const SeriesConfig& series);
[[nodiscard]] std::optional<double> vs_period_one(const HarmonicEngine& eng,
                                                  double d);

// Steady-state error-amplifier output y(t) for the period-one orbit at
// source voltage Vs and switching phase d.
[[nodiscard]] double y_steady_state(const ConverterConfig& cfg, double Vs,
                                    double d, double t,
                                    const SeriesConfig& series);
[[nodiscard]] double y_steady_state(const HarmonicEngine& eng, double Vs,
                                    double d, double t);

// Critical curve: the Vs at which a period-two perturbation of phase d
// becomes marginal. nullopt on nonpositive denominator.
[[nodiscard]] std::optional<double> vs_critical(const ConverterConfig& cfg,
                                                double d,
                                                const SeriesConfig& series);
[[nodiscard]] std::optional<double> vs_critical(const HarmonicEngine& eng,
                                                double d);

// Period-two residual relation solved for Vs at finite delta (diagnostic).
// Throws DegenerateDelta at delta = 0.
[[nodiscard]] std::optional<double> vs_period_two(const ConverterConfig& cfg,
                                                  const PeriodTwoPoint& pt,
                                                  const SeriesConfig& series);
[[nodiscard]] std::optional<double> vs_period_two(const HarmonicEngine& eng,
                                                  const PeriodTwoPoint& pt);

// Fourier coefficient c_n of the 2T-periodic switch waveform reconstruction:
//   odd n:  (Vs/(n pi)) e^{-j n w d / 2} sin(n w delta / 2)
//   even n: (Vs/(j n pi)) (e^{-j n w d / 2} cos(n w delta / 2) - e^{-j n w T / 2})
// Throws DomainError on n = 0 (DC is handled by callers).
[[nodiscard]] std::complex<double> fourier_coeffs_period_two(
    int n, const ConverterConfig& cfg, double Vs, const PeriodTwoPoint& pt);

// First-harmonic estimate of the critical source voltage:
//   ((Vh - Vl)/2) / Re[G(j w) - G(j w/2)];  nullopt on nonpositive denominator.
[[nodiscard]] std::optional<double> estimate_vs_critical(
    const ConverterConfig& cfg);

// Closed-form voltage-mode approximation
//   ((Vh - Vl)/(6 g1)) ((R + Rc)/R) L C w^2.
[[nodiscard]] ApproxResult approx_vs_critical_voltage_mode(
    const ConverterConfig& cfg, double g1);

// Closed-form critical feedback gain ((Vh - Vl)/(6 Vs)) ((R + Rc)/R) L C w^2.
[[nodiscard]] ApproxResult approx_critical_gain(const ConverterConfig& cfg,
                                                double Vs);

// Closed-form current-mode approximation
//   ((Vh - Vl)/(6 Rs)) ((R + Rc)/(R Rc)) L^2 w^2.
// Throws SingularParameter at Rc = 0 and ModeMismatch outside current mode.
[[nodiscard]] ApproxResult approx_vs_critical_current_mode(
    const ConverterConfig& cfg);

} // namespace pdbuck
