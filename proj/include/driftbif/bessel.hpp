// bessel.hpp — modified Bessel functions of the first kind I_m(z) by the
// defining power series, with a certified truncation-error bound.
//
//   I_m(z) = sum_{j>=0} (z/2)^{2j+m} / (j! (j+m)!)          (A&S 9.6.10)
//
// The term ratio t_{j+1}/t_j = (z/2)^2 / ((j+1)(j+m+1)) is decreasing, so
// once it drops below 1 the neglected tail is bounded by the geometric
// series t_J * r / (1 - r).  Only integer orders are needed, so the
// factorials are carried incrementally alongside the terms; there is no
// general gamma evaluation and no asymptotic-regime switch (arguments
// stay modest here).

#pragma once

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace driftbif {

struct BesselEval {
    int order = 0;
    double argument = 0.0;
    double value = 0.0;
    int terms_used = 0;
    // Upper bound on |value - I_m(z)|: geometric tail bound of the series
    // plus one ulp of the returned value for the final rounding.
    double tail_bound = 0.0;
};

// Series evaluation of I_m(z).  Stops as soon as the certified tail bound
// falls below tol; if tol is below what double precision can deliver for
// this argument, the summation stops at machine saturation and the
// best-achievable bound is reported in tail_bound instead of looping.
inline BesselEval bessel_i(int m, double z, double tol) {
    if (m < 0) throw std::invalid_argument("bessel_i: order must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("bessel_i: tol must be > 0");
    if (!std::isfinite(z) || std::fabs(z) > 700.0)
        throw std::domain_error("bessel_i: |z| must be finite and <= 700");

    const long double h = static_cast<long double>(z) / 2.0L;
    const long double h2 = h * h;

    long double term = 1.0L;  // t_0 = (z/2)^m / m!, built incrementally
    for (int i = 1; i <= m; ++i) term *= h / i;

    long double sum = term;
    int terms = 1;
    long double series_tail = 0.0L;

    // At most a few hundred terms are ever needed for |z| <= 700.
    constexpr int kMaxTerms = 5000;
    for (int j = 0; j < kMaxTerms; ++j) {
        const long double ratio = h2 / ((static_cast<long double>(j) + 1.0L) * (j + m + 1.0L));
        series_tail = (ratio < 1.0L) ? std::fabs(term) * ratio / (1.0L - ratio)
                                     : std::fabs(term);  // not yet certifiable
        const long double floor_bound =
            series_tail + static_cast<long double>(DBL_EPSILON) * std::fabs(sum);
        if (ratio < 1.0L && floor_bound <= static_cast<long double>(tol)) break;
        // Machine saturation: further terms cannot move the double value.
        if (ratio < 1.0L && series_tail <= 0.25L * DBL_EPSILON * std::fabs(sum)) break;
        term *= ratio;
        sum += term;
        ++terms;
    }

    BesselEval out;
    out.order = m;
    out.argument = z;
    out.value = static_cast<double>(sum);
    out.terms_used = terms;
    out.tail_bound =
        static_cast<double>(series_tail + static_cast<long double>(DBL_EPSILON) *
                                              std::fabs(static_cast<long double>(out.value)));
    return out;
}

// Defect of the three-term recurrence I_{m-1}(z) - I_{m+1}(z) = (2m/z) I_m(z)
// (A&S 9.6.26) at the computed values; a self-test that should sit at the
// rounding floor.
inline double bessel_recurrence_defect(int m, double z, double tol) {
    if (m < 1) throw std::invalid_argument("bessel_recurrence_defect: m must be >= 1");
    if (z == 0.0) throw std::invalid_argument("bessel_recurrence_defect: z must be nonzero");
    const long double lower = bessel_i(m - 1, z, tol).value;
    const long double mid = bessel_i(m, z, tol).value;
    const long double upper = bessel_i(m + 1, z, tol).value;
    const long double rhs = (2.0L * m / static_cast<long double>(z)) * mid;
    return static_cast<double>(std::fabs(lower - upper - rhs));
}

// Envelope e^{(|z|/2)^2} (|z|/2)^m / m!  >=  |I_m(z)|, from bounding the
// series sum_j (|z|/2)^{2j} / (j!)^2 by exp((|z|/2)^2).  Saturates to +inf
// for very large |z|, which is still a valid upper bound.
inline double coefficient_decay_bound(int m, double z) {
    if (m < 0) throw std::invalid_argument("coefficient_decay_bound: order must be >= 0");
    const long double h = std::fabs(static_cast<long double>(z)) / 2.0L;
    long double t = 1.0L;
    for (int i = 1; i <= m; ++i) t *= h / i;
    return static_cast<double>(std::exp(h * h) * t);
}

}  // namespace driftbif
