// kernel_analysis.hpp — Fourier-multiplier analysis of the linearized
// operator L_c h = a Laplace(h) + c div(Phi * grad h) and the kernel
// non-degeneracy checks behind bifurcation detection.
//
// On the mode e^{2 pi i k.y} the operator acts by the multiplier
//   m(k) = -(2 pi)^2 |k|^2 (a + c Phi_hat(k)),
// which vanishes at a nonzero mode k0 exactly when c = -a / Phi_hat(k0).
// A candidate passes the non-degeneracy test when Phi_hat(k0) is nonzero
// and no other lattice mode shares its value, which forces the nullspace
// of the critical multiplier to be one-dimensional in the even subspace.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftbif/cosine_series.hpp"
#include "driftbif/kernel_spectrum.hpp"

namespace driftbif {

// Coefficient values are compared with this absolute tolerance; spectra
// come from floating-point input, so exact equalities need a declared cut.
inline constexpr double kEqTol = 1e-12;

// Multiplier of the linearization at the constant state.  Modes beyond
// the represented lattice are treated as Phi_hat = 0; pass
// `outside_lattice` to be told when that happened.
inline double multiplier(const LatticePoint& k, double a, double c,
                         const KernelSpectrum& kernel, bool* outside_lattice = nullptr) {
    if (!(a > 0.0)) throw std::invalid_argument("multiplier: a must be > 0");
    const bool covered = kernel.covers(k);
    if (outside_lattice) *outside_lattice = !covered;
    const double phi = covered ? kernel.value_at(k) : 0.0;
    return -(kTwoPi * kTwoPi) * mode_norm_sq(k) * (a + c * phi);
}

struct HypothesisVerdict {
    bool nonzero = false;    // Phi_hat(k0) != 0
    bool separated = false;  // no other mode shares Phi_hat(k0)
    struct Violation {
        LatticePoint mode;
        double gap;  // |Phi_hat(k) - Phi_hat(k0)|
    };
    std::vector<Violation> violating_modes;

    bool satisfied() const { return nonzero && separated; }
};

struct BifurcationCandidate {
    LatticePoint k0;
    double c0 = 0.0;  // -a / Phi_hat(k0)
    HypothesisVerdict hypothesis_H;
    // Number of nonzero lattice-mode pairs {k,-k} whose multiplier
    // vanishes at c0; equals 1 exactly when the candidate is separated.
    int kernel_dim = 0;
};

struct BifurcationScan {
    std::vector<BifurcationCandidate> candidates;
    bool constant_kernel = false;
    int lattice_radius = 0;  // radius the separation scan covered
    std::string diagnostic;
};

// One candidate per stored nonzero mode with a nonvanishing coefficient.
// Separation is checked against every represented mode: absent modes
// within the radius carry Phi_hat = 0 and can only collide with a
// vanishing Phi_hat(k0), which is excluded, so scanning stored entries
// is exhaustive.
inline BifurcationScan detect_bifurcations(double a, const KernelSpectrum& kernel) {
    if (!(a > 0.0)) throw std::invalid_argument("detect_bifurcations: a must be > 0");
    BifurcationScan scan;
    scan.lattice_radius = kernel.lattice_radius();
    if (kernel.is_constant(kEqTol)) {
        scan.constant_kernel = true;
        scan.diagnostic =
            "constant kernel: every nonzero-mode coefficient vanishes, "
            "uniqueness argument inapplicable";
        return scan;
    }
    for (const auto& [k0, phi0] : kernel.entries()) {
        if (is_zero_mode(k0) || std::fabs(phi0) <= kEqTol) continue;
        BifurcationCandidate cand;
        cand.k0 = k0;
        cand.c0 = -a / phi0;
        cand.hypothesis_H.nonzero = true;
        cand.kernel_dim = 0;
        for (const auto& [k, phi] : kernel.entries()) {
            const double gap = std::fabs(phi - phi0);
            if (k == k0) {
                if (!is_zero_mode(k)) ++cand.kernel_dim;
                continue;
            }
            if (gap <= kEqTol) {
                cand.hypothesis_H.violating_modes.push_back({k, gap});
                if (!is_zero_mode(k)) ++cand.kernel_dim;
            }
        }
        cand.hypothesis_H.separated = cand.hypothesis_H.violating_modes.empty();
        scan.candidates.push_back(std::move(cand));
    }
    std::sort(scan.candidates.begin(), scan.candidates.end(),
              [](const BifurcationCandidate& lhs, const BifurcationCandidate& rhs) {
                  const double ln = mode_norm_sq(lhs.k0), rn = mode_norm_sq(rhs.k0);
                  return ln != rn ? ln < rn : lhs.k0 < rhs.k0;
              });
    return scan;
}

// Nonzero modes where a + b Phi_hat(k) = 0 (within kEqTol): the even-mode
// nullspace of the linear problem a Laplace(u) + b Phi * Laplace(u) = 0.
// An empty result certifies uniqueness up to constants on the lattice.
inline std::vector<LatticePoint> linear_nullspace(double a, double b,
                                                  const KernelSpectrum& kernel) {
    if (!(a > 0.0)) throw std::invalid_argument("linear_nullspace: a must be > 0");
    std::vector<LatticePoint> modes;
    if (b == 0.0) return modes;  // reduces to a Laplace(u) = 0
    for (const auto& [k, phi] : kernel.entries()) {
        if (is_zero_mode(k)) continue;
        if (std::fabs(a + b * phi) <= kEqTol) modes.push_back(k);
    }
    std::sort(modes.begin(), modes.end(),
              [](const LatticePoint& lhs, const LatticePoint& rhs) {
                  const double ln = mode_norm_sq(lhs), rn = mode_norm_sq(rhs);
                  return ln != rn ? ln < rn : lhs < rhs;
              });
    return modes;
}

struct UniquenessCertificate {
    // ||Phi||_{L^2} < a/|b|; false for b = 0, where the linear problem is
    // trivially unique and the criterion is not meaningful.
    bool energy_criterion = false;
    // linear_nullspace is empty on the represented lattice.
    bool spectral_criterion = false;
    double kernel_l2_norm = 0.0;
    double energy_threshold = 0.0;  // a/|b|, +inf for b = 0
    int lattice_radius = 0;
};

inline UniquenessCertificate linear_uniqueness_certificate(double a, double b,
                                                           const KernelSpectrum& kernel) {
    if (!(a > 0.0))
        throw std::invalid_argument("linear_uniqueness_certificate: a must be > 0");
    UniquenessCertificate cert;
    cert.kernel_l2_norm = kernel.l2_norm();
    cert.lattice_radius = kernel.lattice_radius();
    cert.spectral_criterion = linear_nullspace(a, b, kernel).empty();
    if (b == 0.0) {
        cert.energy_criterion = false;
        cert.energy_threshold = std::numeric_limits<double>::infinity();
    } else {
        cert.energy_threshold = a / std::fabs(b);
        cert.energy_criterion = cert.kernel_l2_norm < cert.energy_threshold;
    }
    return cert;
}

struct TransversalityResult {
    double prefactor = 0.0;  // -(2 pi)^2 |k0|^2 Phi_hat(k0)
    double defect = 0.0;     // relative defect of the operator route
    bool passed = false;     // nonzero prefactor, i.e. Phi_hat(k0) != 0
};

// Certifies that the c-derivative of the linearization maps the critical
// mode to a nonzero multiple of itself: d/dc L_c applied to cos(2 pi k0.y)
// is div(Phi * grad .) acting on that mode.  In one dimension the operator
// route runs through the series machinery (derivative then convolution);
// in higher dimensions the derivative is taken as an exact central
// difference of the multiplier in c, which is linear in c.
inline TransversalityResult transversality_check(const BifurcationCandidate& candidate,
                                                 double a, const KernelSpectrum& kernel) {
    if (!(a > 0.0)) throw std::invalid_argument("transversality_check: a must be > 0");
    TransversalityResult result;
    const double phi0 = kernel.value_at(candidate.k0);
    result.prefactor = -(kTwoPi * kTwoPi) * mode_norm_sq(candidate.k0) * phi0;
    result.passed = std::fabs(phi0) > kEqTol;
    if (!result.passed) {
        result.defect = std::numeric_limits<double>::infinity();
        return result;
    }

    if (kernel.dim() == 1) {
        const int k0 = std::abs(candidate.k0[0]);
        const CosineSeries mode = CosineSeries::basis(k0, k0);
        const CosineSeries image = convolve(derivative2(mode), kernel);
        long double num = 0.0L, den = 0.0L;
        for (int m = 1; m <= k0; ++m) {
            const long double want = static_cast<long double>(result.prefactor) * mode.coeff(m);
            const long double diff = image.coeff(m) - want;
            num += diff * diff;
            den += want * want;
        }
        result.defect = double(std::sqrt(double(num / den)));
    } else {
        const double delta = std::max(1e-6, 1e-6 * std::fabs(candidate.c0));
        const double up = multiplier(candidate.k0, a, candidate.c0 + delta, kernel);
        const double down = multiplier(candidate.k0, a, candidate.c0 - delta, kernel);
        const double fd = (up - down) / (2.0 * delta);
        result.defect = std::fabs(fd - result.prefactor) / std::fabs(result.prefactor);
    }
    return result;
}

}  // namespace driftbif
