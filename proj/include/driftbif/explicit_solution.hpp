// explicit_solution.hpp — closed-form family of non-constant steady
// states for the kernel Phi(x) = 2 cos(2 pi x).
//
// Seeking u = c + v with v an even zero-mean cosine series turns the
// steady-state equation into the three-term recurrence
//   V_2 = 2 (a + c),                      m = 1,
//   V_{m-1} - V_{m+1} = -(2 m a / V_1) V_m,   m >= 2,
// which the modified Bessel recurrence I_{m-1} - I_{m+1} = (2m/z) I_m
// solves in closed form:
//   V_m = -(a z / I_1(z)) I_m(z),  c = -a (z I_2(z) / (2 I_1(z)) + 1),
// with z any nonzero real.  Factorial decay of I_m(z) makes the series
// converge absolutely; the neglected tail is certified by the envelope
// |I_m(z)| <= e^{(|z|/2)^2} (|z|/2)^m / m!.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "driftbif/bessel.hpp"
#include "driftbif/cosine_series.hpp"
#include "driftbif/kernel_spectrum.hpp"

namespace driftbif {

struct ExplicitFamilyMember {
    double a = 0.0;
    double z = 0.0;
    std::size_t order = 0;
    double c = 0.0;             // constant part of u
    CosineSeries coeffs;        // V_1..V_M
    double amplitude = 0.0;     // V_1 = -a z
    double tail_certificate = 0.0;  // bound on sum_{m>M} |V_m|
    double bessel_tol = 0.0;    // per-coefficient tolerance actually requested
};

namespace detail {

// sum_{m>M} (|z|/2)^m / m!, closed with the same geometric-ratio device
// as the Bessel tail: once the term ratio (|z|/2)/(m+1) drops below 1/2,
// the remainder is bounded by u_m * r / (1 - r).
inline double factorial_tail_sum(double abs_z, std::size_t M) {
    const long double h = static_cast<long double>(abs_z) / 2.0L;
    long double u = 1.0L;
    for (std::size_t i = 1; i <= M + 1; ++i) u *= h / i;  // (|z|/2)^{M+1} / (M+1)!
    long double total = 0.0L;
    std::size_t m = M + 1;
    for (;;) {
        const long double r = h / (m + 1);
        if (r < 0.5L) {
            total += u / (1.0L - r);
            break;
        }
        total += u;
        u *= r;
        ++m;
    }
    return static_cast<double>(total);
}

}  // namespace detail

// Builds the member at parameters (a, z) truncated to M coefficients.
// Bessel values are evaluated at tolerance tol/M each so the aggregate
// coefficient error stays below tol.
inline ExplicitFamilyMember construct_explicit(double a, double z, std::size_t M,
                                               double tol = 1e-13) {
    if (!(a > 0.0)) throw std::invalid_argument("construct_explicit: a must be > 0");
    if (z == 0.0 || !std::isfinite(z))
        throw std::invalid_argument("construct_explicit: z must be a nonzero real");
    if (M < 2) throw std::invalid_argument("construct_explicit: M must be >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("construct_explicit: tol must be > 0");

    // The recurrence amplifies coefficient errors by O(m^2/z), so the
    // evaluations are driven to machine saturation; tol/M remains the
    // contractual per-coefficient budget and holds a fortiori.
    const double per_coeff_tol = tol / static_cast<double>(M);
    const double request_tol = std::min(per_coeff_tol, 1e-300);
    const BesselEval i1 = bessel_i(1, z, request_tol);
    if (std::fabs(i1.value) < 1e-300)
        throw std::domain_error("construct_explicit: I_1(z) is singularly small");

    ExplicitFamilyMember member;
    member.a = a;
    member.z = z;
    member.order = M;
    member.bessel_tol = per_coeff_tol;
    member.amplitude = -a * z;  // = -(a z / I_1) I_1 exactly

    const double scale = -a * z / i1.value;
    member.coeffs = CosineSeries(M);
    member.coeffs.set_coeff(1, member.amplitude);
    for (std::size_t m = 2; m <= M; ++m)
        member.coeffs.set_coeff(static_cast<int>(m),
                                scale * bessel_i(static_cast<int>(m), z, request_tol).value);

    const BesselEval i2 = bessel_i(2, z, request_tol);
    member.c = -a * (z * i2.value / (2.0 * i1.value) + 1.0);

    const double envelope = std::exp((z / 2.0) * (z / 2.0));  // C_z
    member.tail_certificate = std::fabs(scale) * envelope *
                              detail::factorial_tail_sum(std::fabs(z), M);
    return member;
}

// Defects of the recurrence at the stored coefficients: entry 0 is
// |V_2 - 2(a+c)| and entry m-1 (for 2 <= m <= M-1) is
// |V_{m-1} - V_{m+1} + (2 m a / V_1) V_m|.  All of them sit at the Bessel
// tolerance when the member is intact — the independent consistency check
// that the closed form solves the recurrence.
inline std::vector<double> recurrence_defect(const ExplicitFamilyMember& member) {
    const std::size_t M = member.order;
    if (M < 3) throw std::invalid_argument("recurrence_defect: member order must be >= 3");
    const CosineSeries& v = member.coeffs;
    std::vector<double> defects;
    defects.reserve(M - 1);
    defects.push_back(std::fabs(v.coeff(2) - 2.0 * (member.a + member.c)));
    for (std::size_t m = 2; m <= M - 1; ++m) {
        const long double lhs = static_cast<long double>(v.coeff(int(m) - 1)) - v.coeff(int(m) + 1);
        const long double rhs =
            -(2.0L * m * member.a / static_cast<long double>(v.coeff(1))) * v.coeff(int(m));
        defects.push_back(static_cast<double>(std::fabs(lhs - rhs)));
    }
    return defects;
}

struct EquationResidual {
    double l2 = 0.0;
    std::vector<double> per_mode;  // modes 1..M_check
    // A priori bound on the truncation coupling at modes M and M+1,
    // from the factorial envelope on the dropped coefficients.
    double coupling_bound = 0.0;
};

// Residual of the full steady-state equation for u = c + v on modes
// 1..M_check.  For an intact member the only non-rounding contribution
// is the coupling to the dropped modes at M and M+1.
inline EquationResidual full_equation_residual(const ExplicitFamilyMember& member,
                                               std::size_t M_check) {
    if (M_check < member.order)
        throw std::invalid_argument("full_equation_residual: M_check must be >= member order");
    const KernelSpectrum kernel = cosine_kernel(static_cast<int>(member.order));
    const DriftExpansion res =
        steady_state_residual(member.a, member.c, member.coeffs, kernel, M_check);

    EquationResidual out;
    out.per_mode.assign(res.series.coeffs().begin(), res.series.coeffs().end());
    out.l2 = res.series.l2_coeff_norm();

    const std::size_t M = member.order;
    const double v1 = std::fabs(member.amplitude);
    const double dropped =
        std::fabs(member.amplitude / bessel_i(1, member.z, member.bessel_tol).value) *
        coefficient_decay_bound(static_cast<int>(M) + 1, member.z);
    const double pi2 = kPiL * kPiL;
    const double wm1 = kTwoPi * (M + 1);
    out.coupling_bound =
        (2.0 * pi2 * M * v1 + wm1 * wm1 * member.a + 2.0 * pi2 * (M + 1) * v1) * dropped;
    return out;
}

struct FamilyPoint {
    double z = 0.0;
    double amplitude = 0.0;  // -a z
    double c = 0.0;
};

// The branch in closed form: (z, -a z, c(z)) triples.  c is even in z and
// the amplitude odd, so both signs trace the same curve in (|s|, c).
inline std::vector<FamilyPoint> family_curve(double a, const std::vector<double>& z_values,
                                             std::size_t M) {
    std::vector<FamilyPoint> points;
    points.reserve(z_values.size());
    for (double z : z_values) {
        const ExplicitFamilyMember member = construct_explicit(a, z, M);
        points.push_back({z, member.amplitude, member.c});
    }
    return points;
}

}  // namespace driftbif
