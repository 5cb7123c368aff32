#include "pdbuck/rational.hpp"

#include <cmath>

namespace pdbuck {

namespace {

constexpr int kMaxDegree = 16;

int trimmed_degree(const std::vector<double>& coeffs) {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        if (coeffs[static_cast<size_t>(i)] != 0.0) return i;
    }
    return 0;
}

std::complex<double> horner(const std::vector<double>& coeffs,
                            std::complex<double> s) {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

void check_coeffs(const std::vector<double>& coeffs, const char* which) {
    if (coeffs.empty())
        throw InvalidConfig(std::string(which) + " coefficient list is empty");
    if (static_cast<int>(coeffs.size()) - 1 > kMaxDegree)
        throw InvalidConfig(std::string(which) + " degree exceeds 16");
    for (double c : coeffs) {
        if (!std::isfinite(c))
            throw InvalidConfig(std::string(which) +
                                " has a non-finite coefficient");
    }
}

} // namespace

RationalFunction::RationalFunction(std::vector<double> num,
                                   std::vector<double> den)
    : num_coeffs(std::move(num)), den_coeffs(std::move(den)) {
    check_coeffs(num_coeffs, "numerator");
    check_coeffs(den_coeffs, "denominator");
    if (den_coeffs[static_cast<size_t>(trimmed_degree(den_coeffs))] == 0.0)
        throw InvalidConfig("denominator polynomial is identically zero");
}

int RationalFunction::num_degree() const { return trimmed_degree(num_coeffs); }

int RationalFunction::den_degree() const { return trimmed_degree(den_coeffs); }

bool RationalFunction::strictly_proper() const {
    // The zero numerator is strictly proper by convention.
    bool num_is_zero = true;
    for (double c : num_coeffs) num_is_zero = num_is_zero && c == 0.0;
    return num_is_zero || num_degree() < den_degree();
}

std::complex<double> eval(const RationalFunction& rf, std::complex<double> s) {
    std::complex<double> den = horner(rf.den_coeffs, s);
    if (den == std::complex<double>(0.0, 0.0))
        throw PoleHit("rational function evaluated on a pole");
    return horner(rf.num_coeffs, s) / den;
}

RationalFunction rf_scale(const RationalFunction& a, double k) {
    std::vector<double> num = a.num_coeffs;
    for (double& c : num) c *= k;
    return RationalFunction(std::move(num), a.den_coeffs);
}

namespace {

std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> poly_sub(std::vector<double> a,
                             const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

} // namespace

RationalFunction rf_mul(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(poly_mul(a.num_coeffs, b.num_coeffs),
                            poly_mul(a.den_coeffs, b.den_coeffs));
}

RationalFunction rf_sub(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(poly_sub(poly_mul(a.num_coeffs, b.den_coeffs),
                                     poly_mul(b.num_coeffs, a.den_coeffs)),
                            poly_mul(a.den_coeffs, b.den_coeffs));
}

std::vector<double> asymptotic_coefficients(const RationalFunction& rf,
                                            int order) {
    if (order < 1) throw InvalidConfig("asymptotic order must be >= 1");
    std::vector<double> out(static_cast<size_t>(order) + 1, 0.0);

    bool num_is_zero = true;
    for (double c : rf.num_coeffs) num_is_zero = num_is_zero && c == 0.0;
    if (num_is_zero) return out;

    int p = rf.num_degree();
    int q = rf.den_degree();
    if (p >= q)
        throw InvalidConfig(
            "high-frequency expansion requires a strictly proper function");

    // Reverse both polynomials: rf(s) = x^(q-p) * nrev(x)/drev(x), x = 1/s.
    std::vector<double> nrev(static_cast<size_t>(p) + 1);
    std::vector<double> drev(static_cast<size_t>(q) + 1);
    for (int i = 0; i <= p; ++i)
        nrev[static_cast<size_t>(i)] = rf.num_coeffs[static_cast<size_t>(p - i)];
    for (int i = 0; i <= q; ++i)
        drev[static_cast<size_t>(i)] = rf.den_coeffs[static_cast<size_t>(q - i)];

    // Series division nrev/drev = sum b_k x^k.
    std::vector<double> b(static_cast<size_t>(order) + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        double acc = k <= p ? nrev[static_cast<size_t>(k)] : 0.0;
        for (int i = 1; i <= std::min(k, q); ++i)
            acc -= drev[static_cast<size_t>(i)] * b[static_cast<size_t>(k - i)];
        b[static_cast<size_t>(k)] = acc / drev[0];
    }

    for (int m = q - p; m <= order; ++m)
        out[static_cast<size_t>(m)] = b[static_cast<size_t>(m - (q - p))];
    return out;
}

} // namespace pdbuck
