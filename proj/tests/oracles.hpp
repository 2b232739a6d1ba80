// oracles.hpp — independent reference computations used only by tests.
// Each oracle deliberately takes a different route than the library:
//   * bessel_i_reference sums the defining series in extended precision
//     with lgammal-based terms (no term recurrence, no incremental
//     factorials).
//   * drift_term_oracle builds div(v (Phi * grad w)) pseudospectrally:
//     sample on an alias-free grid, multiply pointwise, project onto the
//     sine basis, differentiate mode-wise.
//   * fd_directional_derivative differences the nonlinear map directly.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "driftbif/continuation.hpp"
#include "driftbif/cosine_series.hpp"
#include "driftbif/kernel_spectrum.hpp"

namespace oracles {

inline constexpr long double kTwoPiRef = 6.283185307179586476925286766559L;

// I_m(z) = sum_j (z/2)^{2j+m} / (j! (j+m)!), summed term by term in long
// double through expl/lgammal.  Sixty terms are far more than needed for
// |z| <= 8 at long-double accuracy.
inline long double bessel_i_reference(int m, long double z, int terms = 60) {
    if (z == 0.0L) return m == 0 ? 1.0L : 0.0L;
    const long double half = std::fabs(z) / 2.0L;
    const long double log_half = std::log(half);
    long double sum = 0.0L;
    for (int j = 0; j < terms; ++j) {
        const long double log_term = (2.0L * j + m) * log_half -
                                     std::lgamma(static_cast<long double>(j) + 1.0L) -
                                     std::lgamma(static_cast<long double>(j + m) + 1.0L);
        sum += std::exp(log_term);
    }
    const bool negative = (z < 0.0L) && (m % 2 == 1);
    return negative ? -sum : sum;
}

// Mode-p cosine coefficients of div(v (Phi * grad w)) computed on a grid
// of n >= 2(order(v)+order(w))+1 points, so the discrete projection of
// the trigonometric product is exact.
inline std::vector<double> drift_term_oracle(const driftbif::CosineSeries& v,
                                             const driftbif::CosineSeries& w,
                                             const driftbif::KernelSpectrum& kernel,
                                             double constant_part, int p_max) {
    const int mv = static_cast<int>(v.order());
    const int mw = static_cast<int>(w.order());
    const int n = 4 * (mv + mw) + 5;

    // g = Phi * w_x sampled directly from the sine series.
    std::vector<long double> product(n);
    for (int i = 0; i < n; ++i) {
        const long double x = static_cast<long double>(i) / n;
        long double g = 0.0L;
        for (int q = 1; q <= mw; ++q)
            g += -kTwoPiRef * q * kernel.value_at(q) * w.coeff(q) *
                 std::sin(kTwoPiRef * q * x);
        long double vx = 0.0L;
        for (int mm = 1; mm <= mv; ++mm)
            vx += v.coeff(mm) * std::cos(kTwoPiRef * mm * x);
        product[i] = (constant_part + vx) * g;
    }

    // Sine projection of the product, then mode-wise differentiation:
    // d/dx [S_p sin(2 pi p x)] = 2 pi p S_p cos(2 pi p x).
    std::vector<double> out(static_cast<std::size_t>(p_max) + 1, 0.0);
    for (int p = 1; p <= p_max; ++p) {
        long double sp = 0.0L;
        for (int i = 0; i < n; ++i)
            sp += product[i] * std::sin(kTwoPiRef * p * i / static_cast<long double>(n));
        sp *= 2.0L / n;
        out[p] = static_cast<double>(kTwoPiRef * p * sp);
    }
    return out;
}

// Central finite difference of the steady-state map in the direction
// (dc, h); exact for a quadratic map up to rounding.
inline driftbif::CosineSeries fd_directional_derivative(
    double c, const driftbif::CosineSeries& v, double a,
    const driftbif::KernelSpectrum& kernel, double dc, const driftbif::CosineSeries& h,
    double step, std::size_t out_order) {
    using driftbif::CosineSeries;
    const CosineSeries plus =
        driftbif::evaluate_map(c + step * dc, v + step * h, a, kernel, out_order).series;
    const CosineSeries minus =
        driftbif::evaluate_map(c - step * dc, v - step * h, a, kernel, out_order).series;
    CosineSeries out(out_order);
    for (int m = 1; m <= static_cast<int>(out_order); ++m)
        out.set_coeff(m, (plus.coeff(m) - minus.coeff(m)) / (2.0 * step));
    return out;
}

// Deterministic random series with |V_m| <= amplitude.
inline driftbif::CosineSeries random_series(std::mt19937& rng, std::size_t order,
                                            double amplitude = 1.0) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    std::vector<double> coeffs(order);
    for (auto& c : coeffs) c = dist(rng);
    return driftbif::CosineSeries(coeffs);
}

// Random series with 1/m^2 coefficient decay, the natural regularity for
// states near the branch.
inline driftbif::CosineSeries random_decaying_series(std::mt19937& rng, std::size_t order,
                                                     double amplitude = 0.5) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coeffs(order);
    for (std::size_t m = 1; m <= order; ++m)
        coeffs[m - 1] = amplitude * dist(rng) / static_cast<double>(m * m);
    return driftbif::CosineSeries(coeffs);
}

}  // namespace oracles
