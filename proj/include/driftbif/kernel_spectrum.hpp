// kernel_spectrum.hpp — even, real interaction kernels stored by their
// Fourier coefficients on a finite lattice of Z^d.
//
// A kernel Phi is even and real, so its coefficients satisfy
// Phi_hat(-k) = Phi_hat(k) and only one representative per pair {k, -k}
// is stored.  Modes with |k|_inf <= lattice_radius that are absent are
// certified zero; modes beyond the radius are unknown (callers treat
// them as zero and may flag the query).

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace driftbif {

using LatticePoint = std::vector<int>;

inline bool is_zero_mode(const LatticePoint& k) {
    return std::all_of(k.begin(), k.end(), [](int c) { return c == 0; });
}

// Representative of {k, -k} whose first nonzero component is positive.
inline LatticePoint canonical_mode(LatticePoint k) {
    for (int c : k) {
        if (c > 0) break;
        if (c < 0) {
            for (int& ci : k) ci = -ci;
            break;
        }
    }
    return k;
}

inline double mode_norm_sq(const LatticePoint& k) {
    double s = 0.0;
    for (int c : k) s += double(c) * double(c);
    return s;
}

inline int mode_inf_norm(const LatticePoint& k) {
    int m = 0;
    for (int c : k) m = std::max(m, std::abs(c));
    return m;
}

class KernelSpectrum {
public:
    // `supplied_l2_norm` lets a caller carry the exact ||Phi||_{L^2} when
    // the stored lattice truncates the true spectrum; it may not fall
    // below the Parseval value of the stored entries.
    KernelSpectrum(int dim, int lattice_radius,
                   const std::vector<std::pair<LatticePoint, double>>& coefficients,
                   double supplied_l2_norm = -1.0)
        : dim_(dim), radius_(lattice_radius) {
        if (dim < 1) throw std::invalid_argument("KernelSpectrum: dim must be >= 1");
        if (lattice_radius < 1)
            throw std::invalid_argument("KernelSpectrum: lattice_radius must be >= 1");
        for (const auto& [k, value] : coefficients) {
            if (static_cast<int>(k.size()) != dim)
                throw std::invalid_argument("KernelSpectrum: mode dimension mismatch");
            if (!std::isfinite(value))
                throw std::invalid_argument("KernelSpectrum: non-finite coefficient");
            if (mode_inf_norm(k) > radius_)
                throw std::invalid_argument(
                    "KernelSpectrum: mode outside declared lattice_radius");
            LatticePoint rep = canonical_mode(k);
            if (entries_.count(rep))
                throw std::invalid_argument(
                    "KernelSpectrum: duplicate mode after +/-k identification");
            entries_.emplace(std::move(rep), value);
        }
        l2_norm_ = computed_l2_norm();
        if (supplied_l2_norm >= 0.0) {
            if (supplied_l2_norm < l2_norm_ * (1.0 - 1e-12))
                throw std::invalid_argument(
                    "KernelSpectrum: supplied l2_norm is below the Parseval value of the "
                    "stored coefficients");
            l2_norm_ = supplied_l2_norm;
        }
    }

    // Spectrum of 2*cos(2*pi*x): coefficient 1 at modes +/-1, zero elsewhere.
    static KernelSpectrum cosine(int lattice_radius) {
        return KernelSpectrum(1, std::max(lattice_radius, 1), {{{1}, 1.0}});
    }

    // Recovers coefficients from samples of a 1-periodic kernel on the
    // uniform grid x_i = i/N.  Evenness is enforced by keeping the cosine
    // part; the discarded odd part's magnitude is reported through
    // `evenness_defect` (max over modes of the sine-transform residue).
    static KernelSpectrum from_samples(const std::vector<double>& samples,
                                       double* evenness_defect = nullptr) {
        const int n = static_cast<int>(samples.size());
        if (n < 3) throw std::invalid_argument("KernelSpectrum: need at least 3 samples");
        for (double s : samples)
            if (!std::isfinite(s))
                throw std::invalid_argument("KernelSpectrum: non-finite sample");
        const int radius = (n - 1) / 2;
        const long double two_pi = 6.283185307179586476925286766559L;
        std::vector<std::pair<LatticePoint, double>> coefficients;
        long double max_odd = 0.0L;
        for (int k = 0; k <= radius; ++k) {
            long double even_part = 0.0L, odd_part = 0.0L;
            for (int i = 0; i < n; ++i) {
                const long double phase = two_pi * k * i / n;
                even_part += samples[i] * std::cos(phase);
                odd_part += samples[i] * std::sin(phase);
            }
            coefficients.push_back({{k}, double(even_part / n)});
            max_odd = std::max(max_odd, std::fabs(odd_part / n));
        }
        if (evenness_defect) *evenness_defect = double(max_odd);
        return KernelSpectrum(1, std::max(radius, 1), coefficients);
    }

    int dim() const { return dim_; }
    int lattice_radius() const { return radius_; }
    const std::map<LatticePoint, double>& entries() const { return entries_; }

    // Phi_hat(k); zero for modes not stored.  Evenness is applied through
    // the canonical representative.
    double value_at(const LatticePoint& k) const {
        if (static_cast<int>(k.size()) != dim_)
            throw std::invalid_argument("KernelSpectrum: query dimension mismatch");
        auto it = entries_.find(canonical_mode(k));
        return it == entries_.end() ? 0.0 : it->second;
    }

    // 1-d convenience accessor.
    double value_at(int m) const { return value_at(LatticePoint{m}); }

    bool covers(const LatticePoint& k) const { return mode_inf_norm(k) <= radius_; }

    // True when the spectrum certifies all 1-d modes 1..m (zero if absent).
    bool covers_up_to(int m) const { return dim_ == 1 && radius_ >= m; }

    // ||Phi||_{L^2} by Parseval over the represented lattice, counting
    // both members of each +/-k pair.
    double l2_norm() const { return l2_norm_; }

    // A constant kernel has no nonzero-mode coefficient above `tol`.
    bool is_constant(double tol) const {
        for (const auto& [k, value] : entries_)
            if (!is_zero_mode(k) && std::fabs(value) > tol) return false;
        return true;
    }

private:
    double computed_l2_norm() const {
        long double sum = 0.0L;
        for (const auto& [k, value] : entries_) {
            const long double v2 = static_cast<long double>(value) * value;
            sum += is_zero_mode(k) ? v2 : 2.0L * v2;
        }
        return double(std::sqrt(double(sum)));
    }

    int dim_;
    int radius_;
    std::map<LatticePoint, double> entries_;
    double l2_norm_ = 0.0;
};

inline KernelSpectrum cosine_kernel(int lattice_radius) {
    return KernelSpectrum::cosine(lattice_radius);
}

// Checks that a caller-supplied spectrum is the 2*cos(2*pi*x) kernel
// (coefficient 1 at mode 1, zero elsewhere), up to `tol`.
inline bool is_cosine_kernel(const KernelSpectrum& kernel, double tol = 1e-12) {
    if (kernel.dim() != 1) return false;
    for (const auto& [k, value] : kernel.entries()) {
        const double expected = (k[0] == 1 || k[0] == -1) ? 1.0 : 0.0;
        if (std::fabs(value - expected) > tol) return false;
    }
    return std::fabs(kernel.value_at(1) - 1.0) <= tol;
}

}  // namespace driftbif
