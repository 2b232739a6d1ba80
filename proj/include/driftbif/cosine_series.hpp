// cosine_series.hpp — exact arithmetic on truncated even cosine series
// over the 1-periodic torus.
//
// A series stores V_1..V_M with v(x) = sum_m V_m cos(2*pi*m*x); the mean
// mode V_0 is identically zero.  Products of series are expanded through
// the identity cos(a)cos(b) = [cos(a+b) + cos(a-b)]/2 in coefficient
// space, so quadratic terms are exact up to the caller's output order
// with no aliasing; the discarded tail is returned as a diagnostic.
//
// Key operations:
//   derivative2            v -> v_xx,   coefficient -(2*pi*m)^2 V_m
//   convolve               v -> Phi*v,  coefficient Phi_hat(m) V_m
//   convolved_laplacian    v -> div(Phi * grad v)      (diagonal)
//   advection_divergence   (v,w) -> div(v (Phi * grad w))
//   nonlinear_drift_term   (c,v) -> div((c+v)(Phi * grad v))
//   steady_state_residual  (a,c,v) -> a v_xx + div((c+v)(Phi * grad v))
//   sobolev_norm           H^s norm, (sum (1+(2 pi m)^2)^s V_m^2 / 2)^{1/2}

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "driftbif/kernel_spectrum.hpp"

namespace driftbif {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
inline constexpr long double kPiL = 3.1415926535897932384626433832795L;

class CosineSeries {
public:
    CosineSeries() = default;

    explicit CosineSeries(std::size_t order) : coeffs_(order, 0.0) {}

    explicit CosineSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        for (double v : coeffs_)
            if (!std::isfinite(v))
                throw std::invalid_argument("CosineSeries: non-finite coefficient");
    }

    // amplitude * cos(2*pi*mode*x), embedded in a series of the given order.
    static CosineSeries basis(std::size_t order, int mode, double amplitude = 1.0) {
        if (mode < 1 || static_cast<std::size_t>(mode) > order)
            throw std::invalid_argument("CosineSeries::basis: mode out of range");
        CosineSeries s(order);
        s.coeffs_[mode - 1] = amplitude;
        return s;
    }

    std::size_t order() const { return coeffs_.size(); }

    // V_m with the zero-mean and truncation conventions built in:
    // V_0 = 0 and V_m = 0 beyond the stored order.
    double coeff(int m) const {
        if (m < 1 || static_cast<std::size_t>(m) > coeffs_.size()) return 0.0;
        return coeffs_[m - 1];
    }

    void set_coeff(int m, double value) {
        if (m < 1 || static_cast<std::size_t>(m) > coeffs_.size())
            throw std::out_of_range("CosineSeries::set_coeff: mode out of range");
        coeffs_[m - 1] = value;
    }

    const std::vector<double>& coeffs() const { return coeffs_; }

    double evaluate(double x) const {
        if (!std::isfinite(x)) throw std::invalid_argument("CosineSeries: x not finite");
        long double sum = 0.0L;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            sum += coeffs_[i] * std::cos(kTwoPiL * static_cast<long double>(i + 1) * x);
        return double(sum);
    }

    // Pads with zeros or discards high modes.
    CosineSeries truncated(std::size_t new_order) const {
        CosineSeries out(new_order);
        const std::size_t n = std::min(new_order, coeffs_.size());
        for (std::size_t i = 0; i < n; ++i) out.coeffs_[i] = coeffs_[i];
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : coeffs_) m = std::max(m, std::fabs(v));
        return m;
    }

    double l2_coeff_norm() const {
        long double s = 0.0L;
        for (double v : coeffs_) s += static_cast<long double>(v) * v;
        return double(std::sqrt(double(s)));
    }

private:
    std::vector<double> coeffs_;
};

inline CosineSeries operator+(const CosineSeries& u, const CosineSeries& v) {
    CosineSeries out(std::max(u.order(), v.order()));
    for (int m = 1; m <= static_cast<int>(out.order()); ++m)
        out.set_coeff(m, u.coeff(m) + v.coeff(m));
    return out;
}

inline CosineSeries operator-(const CosineSeries& u, const CosineSeries& v) {
    CosineSeries out(std::max(u.order(), v.order()));
    for (int m = 1; m <= static_cast<int>(out.order()); ++m)
        out.set_coeff(m, u.coeff(m) - v.coeff(m));
    return out;
}

inline CosineSeries operator*(double a, const CosineSeries& v) {
    CosineSeries out(v.order());
    for (int m = 1; m <= static_cast<int>(v.order()); ++m) out.set_coeff(m, a * v.coeff(m));
    return out;
}

// Second derivative: coefficient m maps to -(2*pi*m)^2 V_m.
inline CosineSeries derivative2(const CosineSeries& v) {
    CosineSeries out(v.order());
    for (int m = 1; m <= static_cast<int>(v.order()); ++m) {
        const double w = kTwoPi * m;
        out.set_coeff(m, -(w * w) * v.coeff(m));
    }
    return out;
}

// Convolution Phi * v is diagonal in this basis: coefficient m maps to
// Phi_hat(m) V_m.  The kernel must certify modes 1..order (absent = zero).
inline CosineSeries convolve(const CosineSeries& v, const KernelSpectrum& kernel) {
    if (!kernel.covers_up_to(static_cast<int>(v.order())))
        throw std::invalid_argument(
            "convolve: kernel does not cover the series order (dim or radius mismatch)");
    CosineSeries out(v.order());
    for (int m = 1; m <= static_cast<int>(v.order()); ++m)
        out.set_coeff(m, kernel.value_at(m) * v.coeff(m));
    return out;
}

// div(Phi * grad v): also diagonal, coefficient -(2*pi*m)^2 Phi_hat(m) V_m.
inline CosineSeries convolved_laplacian(const CosineSeries& v, const KernelSpectrum& kernel) {
    if (!kernel.covers_up_to(static_cast<int>(v.order())))
        throw std::invalid_argument("convolved_laplacian: kernel does not cover the series");
    CosineSeries out(v.order());
    for (int m = 1; m <= static_cast<int>(v.order()); ++m) {
        const double w = kTwoPi * m;
        out.set_coeff(m, -(w * w) * kernel.value_at(m) * v.coeff(m));
    }
    return out;
}

// H^s norm for the zero-mean series; the 1/2 comes from the L^2 norm of
// cos(2*pi*m*x) on the unit torus.
inline double sobolev_norm(const CosineSeries& v, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    long double sum = 0.0L;
    for (int m = 1; m <= static_cast<int>(v.order()); ++m) {
        const long double w2 = (kTwoPiL * m) * (kTwoPiL * m);
        const long double vm = v.coeff(m);
        sum += std::pow(double(1.0L + w2), s) * vm * vm * 0.5L;
    }
    return double(std::sqrt(double(sum)));
}

namespace detail {

// Sine-series accumulators of v * (Phi * grad w) scaled by -1/(2*pi):
// with G_q = q Phi_hat(q) W_q, acc[p] collects the cos*sin product terms
//   cos(2 pi n x) sin(2 pi q x) = [sin(2 pi (q+n) x) + sin(2 pi (q-n) x)]/2
// at mode p, so that the final cosine coefficient of
// d/dx [v (Phi * grad w)] at mode p is -2 pi^2 p acc[p].
inline std::vector<long double> advection_sine_acc(const CosineSeries& v,
                                                   const CosineSeries& w,
                                                   const KernelSpectrum& kernel) {
    const int mv = static_cast<int>(v.order());
    const int mw = static_cast<int>(w.order());
    if (!kernel.covers_up_to(mw))
        throw std::invalid_argument(
            "advection_divergence: kernel does not cover the differentiated series");
    std::vector<long double> g(static_cast<std::size_t>(mw) + 1, 0.0L);
    for (int q = 1; q <= mw; ++q)
        g[q] = static_cast<long double>(q) * kernel.value_at(q) * w.coeff(q);

    std::vector<long double> acc(static_cast<std::size_t>(mv + mw) + 1, 0.0L);
    for (int n = 1; n <= mv; ++n) {
        const long double vn = v.coeff(n);
        if (vn == 0.0L) continue;
        for (int q = 1; q <= mw; ++q) {
            if (g[q] == 0.0L) continue;
            const long double t = vn * g[q];
            acc[q + n] += t;
            if (q > n)
                acc[q - n] += t;
            else if (n > q)
                acc[n - q] -= t;
        }
    }
    return acc;
}

}  // namespace detail

// A truncated quadratic expansion together with the l2 norm of the
// coefficients discarded above the output order.
struct DriftExpansion {
    CosineSeries series;
    double truncation_residual = 0.0;
};

// div(v (Phi * grad w)), exact up to order(v)+order(w) and truncated to
// out_order; the discarded tail is reported, not dropped silently.
inline DriftExpansion advection_divergence(const CosineSeries& v, const CosineSeries& w,
                                           const KernelSpectrum& kernel,
                                           std::size_t out_order) {
    const auto acc = detail::advection_sine_acc(v, w, kernel);
    const int full = static_cast<int>(acc.size()) - 1;
    DriftExpansion out;
    out.series = CosineSeries(out_order);
    long double tail_sq = 0.0L;
    for (int p = 1; p <= full; ++p) {
        const long double cp = -2.0L * kPiL * kPiL * p * acc[p];
        if (p <= static_cast<int>(out_order))
            out.series.set_coeff(p, double(cp));
        else
            tail_sq += cp * cp;
    }
    out.truncation_residual = double(std::sqrt(double(tail_sq)));
    return out;
}

// div((c+v)(Phi * grad v)) = c div(Phi * grad v) + div(v (Phi * grad v)),
// truncated to out_order (which must be >= order(v)).
inline DriftExpansion nonlinear_drift_term(double constant_part, const CosineSeries& v,
                                           const KernelSpectrum& kernel,
                                           std::size_t out_order) {
    const int mv = static_cast<int>(v.order());
    if (out_order < v.order())
        throw std::invalid_argument("nonlinear_drift_term: out_order must be >= order(v)");
    if (!kernel.covers_up_to(mv))
        throw std::invalid_argument(
            "nonlinear_drift_term: kernel does not cover the series order");
    const auto acc = detail::advection_sine_acc(v, v, kernel);
    const int full = static_cast<int>(acc.size()) - 1;
    DriftExpansion out;
    out.series = CosineSeries(out_order);
    long double tail_sq = 0.0L;
    for (int p = 1; p <= full; ++p) {
        long double cp = -2.0L * kPiL * kPiL * p * acc[p];
        if (p <= mv) {
            const long double w = kTwoPiL * p;
            cp += -(w * w) * constant_part * kernel.value_at(p) * v.coeff(p);
        }
        if (p <= static_cast<int>(out_order))
            out.series.set_coeff(p, double(cp));
        else
            tail_sq += cp * cp;
    }
    out.truncation_residual = double(std::sqrt(double(tail_sq)));
    return out;
}

// Residual of div(a grad u + u Phi * grad u) for u = c + v, i.e.
// a v_xx + div((c+v)(Phi * grad v)), up to out_order.  The linear part is
// grouped as -(2 pi m)^2 (a + c Phi_hat(m)) V_m so that it cancels exactly
// at a critical constant.
inline DriftExpansion steady_state_residual(double a, double c, const CosineSeries& v,
                                            const KernelSpectrum& kernel,
                                            std::size_t out_order) {
    const int mv = static_cast<int>(v.order());
    if (!kernel.covers_up_to(mv))
        throw std::invalid_argument(
            "steady_state_residual: kernel does not cover the series order");
    const auto acc = detail::advection_sine_acc(v, v, kernel);
    const int full = static_cast<int>(acc.size()) - 1;
    DriftExpansion out;
    out.series = CosineSeries(out_order);
    long double tail_sq = 0.0L;
    const int top = std::max(full, static_cast<int>(out_order));
    for (int p = 1; p <= top; ++p) {
        long double cp = 0.0L;
        if (p <= full) cp = -2.0L * kPiL * kPiL * p * acc[p];
        if (p <= mv) {
            const long double w = kTwoPiL * p;
            cp += -(w * w) * (a + c * kernel.value_at(p)) * v.coeff(p);
        }
        if (p <= static_cast<int>(out_order))
            out.series.set_coeff(p, double(cp));
        else
            tail_sq += cp * cp;
    }
    out.truncation_residual = double(std::sqrt(double(tail_sq)));
    return out;
}

}  // namespace driftbif
