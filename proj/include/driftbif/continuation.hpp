// continuation.hpp — numerical tracing of the branch of non-constant
// steady states that splits off the constant branch at a critical
// parameter value.
//
// The steady-state map F(c, v) = a Laplace(v) + div((c+v)(Phi * grad v))
// is an exact quadratic in (c, v): F(c,v) = a Laplace(v) + c A v + B(v,v)
// with A v = div(Phi * grad v) and B(v,w) = div(v (Phi * grad w)).  Its
// derivative in the series direction is
//   h -> a Laplace(h) + c A h + B(h, v) + B(v, h),
// assembled here as a dense matrix on the cosine basis, with the
// c-derivative A v as an extra column.  The branch is followed by natural
// continuation in the amplitude s: the coefficient at the critical mode
// k0 is pinned to s and the square system plus that constraint row is
// solved by Newton with a bordered LU factorization.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftbif/config.hpp"
#include "driftbif/cosine_series.hpp"
#include "driftbif/kernel_analysis.hpp"
#include "driftbif/kernel_spectrum.hpp"
#include "driftbif/linalg.hpp"

namespace driftbif {

// F(c, v) truncated to out_order, with the discarded quadratic tail.
inline DriftExpansion evaluate_map(double c, const CosineSeries& v, double a,
                                   const KernelSpectrum& kernel, std::size_t out_order) {
    return steady_state_residual(a, c, v, kernel, out_order);
}

struct JacobianSystem {
    Matrix dv;                     // action of h -> D_v F(c,v) h on modes 1..M
    std::vector<double> c_column;  // coefficients of A v, the c-derivative
};

// Dense assembly of the derivative at (c, v).  At v = 0 the matrix is
// diagonal with entries -(2 pi k)^2 (a + c Phi_hat(k)).
inline JacobianSystem assemble_jacobian(double c, const CosineSeries& v, double a,
                                        const KernelSpectrum& kernel, std::size_t M) {
    const int n = static_cast<int>(M);
    if (!kernel.covers_up_to(n))
        throw std::invalid_argument("assemble_jacobian: kernel does not cover M modes");
    JacobianSystem sys;
    sys.dv = Matrix(M, M);

    // Diagonal part a Laplace(h) + c A h.
    for (int kmode = 1; kmode <= n; ++kmode) {
        const double w = kTwoPi * kmode;
        sys.dv(kmode - 1, kmode - 1) = -(w * w) * (a + c * kernel.value_at(kmode));
    }

    // B(e_j, v): the basis mode multiplies the convolved gradient of v.
    // With G_q = q Phi_hat(q) V_q, the column-j entry at row p picks up
    // -2 pi^2 p times the signed cos*sin overlap of (j, q).
    std::vector<double> g(M + 1, 0.0);
    for (int q = 1; q <= n; ++q) g[q] = q * kernel.value_at(q) * v.coeff(q);
    const double pi2 = static_cast<double>(kPiL * kPiL);
    for (int j = 1; j <= n; ++j) {
        for (int q = 1; q <= n; ++q) {
            if (g[q] == 0.0) continue;
            const int sum_mode = q + j;
            if (sum_mode <= n) sys.dv(sum_mode - 1, j - 1) += -2.0 * pi2 * sum_mode * g[q];
            if (q > j) {
                const int p = q - j;
                sys.dv(p - 1, j - 1) += -2.0 * pi2 * p * g[q];
            } else if (j > q) {
                const int p = j - q;
                sys.dv(p - 1, j - 1) += 2.0 * pi2 * p * g[q];
            }
        }
        // B(v, e_j): v multiplies the convolved gradient of the basis mode.
        const double gj = j * kernel.value_at(j);
        if (gj != 0.0) {
            for (int nn = 1; nn <= n; ++nn) {
                const double t = v.coeff(nn) * gj;
                if (t == 0.0) continue;
                const int sum_mode = j + nn;
                if (sum_mode <= n) sys.dv(sum_mode - 1, j - 1) += -2.0 * pi2 * sum_mode * t;
                if (j > nn) {
                    const int p = j - nn;
                    sys.dv(p - 1, j - 1) += -2.0 * pi2 * p * t;
                } else if (nn > j) {
                    const int p = nn - j;
                    sys.dv(p - 1, j - 1) += 2.0 * pi2 * p * t;
                }
            }
        }
    }

    sys.c_column.resize(M);
    for (int kmode = 1; kmode <= n; ++kmode) {
        const double w = kTwoPi * kmode;
        sys.c_column[kmode - 1] = -(w * w) * kernel.value_at(kmode) * v.coeff(kmode);
    }
    return sys;
}

// Constant second derivative of the quadratic map:
//   dc1 A h2 + dc2 A h1 + B(h1, h2) + B(h2, h1),
// truncated to out_order.  All higher derivatives vanish identically.
inline CosineSeries second_derivative_action(const CosineSeries& h1, const CosineSeries& h2,
                                             double dc1, double dc2,
                                             const KernelSpectrum& kernel,
                                             std::size_t out_order) {
    CosineSeries out(out_order);
    const CosineSeries a2 = convolved_laplacian(h2, kernel);
    const CosineSeries a1 = convolved_laplacian(h1, kernel);
    const DriftExpansion b12 = advection_divergence(h1, h2, kernel, out_order);
    const DriftExpansion b21 = advection_divergence(h2, h1, kernel, out_order);
    for (int m = 1; m <= static_cast<int>(out_order); ++m)
        out.set_coeff(m, dc1 * a2.coeff(m) + dc2 * a1.coeff(m) +
                             (b12.series.coeff(m) + b21.series.coeff(m)));
    return out;
}

struct BranchPoint {
    double amplitude = 0.0;  // the pinned coefficient V_k0
    double c = 0.0;
    CosineSeries solution;
    double residual_l2 = 0.0;
    int newton_iters = 0;
    bool converged = false;
    // Residual re-evaluated with eight extra modes; guards against
    // truncation-artifact solutions.  NaN when not computed.
    double residual_enlarged = std::numeric_limits<double>::quiet_NaN();
    // min pivot / max entry of the last bordered factorization; a cheap
    // conditioning proxy reported when hypothesis checks were degenerate.
    double jacobian_pivot_ratio = std::numeric_limits<double>::quiet_NaN();
    std::string diagnostic;
};

// Newton solve of {F(c, v) = 0 on modes 1..M, V_k0 = s} from the given
// guess.  The constraint is enforced by re-pinning V_k0 after every
// update, so converged points carry the amplitude exactly.  A singular
// bordered factorization is reported, never silently continued.
inline BranchPoint corrector(double s, double c_guess, const CosineSeries& v_guess, double a,
                             const KernelSpectrum& kernel, int k0, const SolveConfig& config) {
    config.validate();
    if (!std::isfinite(s) || !std::isfinite(c_guess))
        throw std::invalid_argument("corrector: guess must be finite");
    const std::size_t M = v_guess.order();
    if (k0 < 1 || static_cast<std::size_t>(k0) > M)
        throw std::invalid_argument("corrector: constrained mode outside truncation");
    if (!kernel.covers_up_to(static_cast<int>(M)))
        throw std::invalid_argument("corrector: kernel does not cover M modes");

    BranchPoint point;
    point.amplitude = s;
    if (s == 0.0) {
        point.c = c_guess;
        point.solution = CosineSeries(M);
        point.converged = true;
        return point;
    }

    CosineSeries v = v_guess;
    v.set_coeff(k0, s);
    double c = c_guess;

    CosineSeries f = evaluate_map(c, v, a, kernel, M).series;
    double res = f.l2_coeff_norm();
    int iters = 0;
    std::string diagnostic;
    bool converged = false;
    while (true) {
        if (res <= config.newton_tol) {
            converged = true;
            break;
        }
        if (iters >= config.newton_max_iter) {
            diagnostic = "newton_max_iter reached without convergence";
            break;
        }
        const JacobianSystem sys = assemble_jacobian(c, v, a, kernel, M);
        Matrix bordered(M + 1, M + 1);
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t j = 0; j < M; ++j) bordered(i, j) = sys.dv(i, j);
            bordered(i, M) = sys.c_column[i];
        }
        bordered(M, static_cast<std::size_t>(k0 - 1)) = 1.0;

        const LuFactorization lu = lu_factor(std::move(bordered));
        point.jacobian_pivot_ratio = lu.scale > 0.0 ? lu.min_pivot / lu.scale : 0.0;
        if (!lu.ok) {
            diagnostic = "singular bordered jacobian (pivot ratio " +
                         std::to_string(point.jacobian_pivot_ratio) + ")";
            break;
        }

        std::vector<double> rhs(M + 1, 0.0);
        for (std::size_t i = 0; i < M; ++i) rhs[i] = -f.coeff(static_cast<int>(i) + 1);
        const std::vector<double> step = lu.solve(rhs);

        for (std::size_t i = 0; i < M; ++i)
            v.set_coeff(static_cast<int>(i) + 1, v.coeff(static_cast<int>(i) + 1) + step[i]);
        v.set_coeff(k0, s);  // keep the constraint exact
        c += step[M];
        ++iters;
        f = evaluate_map(c, v, a, kernel, M).series;
        res = f.l2_coeff_norm();
    }

    point.c = c;
    point.solution = std::move(v);
    point.residual_l2 = res;
    point.newton_iters = iters;
    point.converged = converged;
    point.diagnostic = std::move(diagnostic);
    return point;
}

struct BranchProvenance {
    double a = 0.0;
    int k0 = 0;
    double c0 = 0.0;
    double s_max = 0.0;
    int steps = 0;
    SolveConfig config;
};

struct Branch {
    explicit Branch(KernelSpectrum kernel_spectrum) : kernel(std::move(kernel_spectrum)) {}

    int k0 = 0;
    double a = 0.0;
    KernelSpectrum kernel;
    std::vector<BranchPoint> points;  // ordered by amplitude
    BranchProvenance provenance;
    // Extrapolation of c(s) to s = 0 from the innermost points; should
    // land on the critical value c0.
    double c_extrapolated = std::numeric_limits<double>::quiet_NaN();
    std::string warning;

    bool all_converged() const {
        for (const auto& p : points)
            if (!p.converged) return false;
        return true;
    }
};

// Natural continuation in the amplitude from s = +-s_max/steps out to
// +-s_max.  The first step uses the tangent predictor (the critical mode
// scaled to s at c = c0); afterwards each point seeds the next.  A first
// step that fails to converge aborts: at this truncation no branch was
// found, which is distinct from the corrector drifting off further out.
inline Branch trace_branch(double a, const KernelSpectrum& kernel,
                           const BifurcationCandidate& candidate, double s_max, int steps,
                           const SolveConfig& config) {
    config.validate();
    if (!(s_max > 0.0)) throw std::invalid_argument("trace_branch: s_max must be > 0");
    if (steps < 1) throw std::invalid_argument("trace_branch: steps must be >= 1");
    if (kernel.dim() != 1)
        throw std::invalid_argument("trace_branch: nonlinear tracing is one-dimensional");
    const int k0 = std::abs(candidate.k0.at(0));
    const std::size_t M = config.truncation;
    if (static_cast<std::size_t>(k0) > M)
        throw std::invalid_argument("trace_branch: k0 exceeds the truncation order");
    if (!kernel.covers_up_to(static_cast<int>(M)))
        throw std::invalid_argument("trace_branch: kernel does not cover the truncation");

    Branch branch(kernel);
    branch.k0 = k0;
    branch.a = a;
    branch.provenance = {a, k0, candidate.c0, s_max, steps, config};
    if (!candidate.hypothesis_H.satisfied())
        branch.warning =
            "kernel non-degeneracy fails for this mode; proceeding, but the bordered "
            "jacobian may be ill-conditioned (see per-point pivot ratios)";

    const double ds = s_max / steps;
    for (const double sign : {-1.0, +1.0}) {
        double c = candidate.c0;
        CosineSeries v(M);
        for (int i = 1; i <= steps; ++i) {
            const double s = sign * ds * i;
            BranchPoint point = corrector(s, c, v, a, kernel, k0, config);
            if (!point.converged && i == 1)
                throw std::runtime_error(
                    "trace_branch: no branch found at this truncation (first continuation "
                    "step failed: " + point.diagnostic + ")");
            if (point.converged) {
                point.residual_enlarged =
                    evaluate_map(point.c, point.solution, a, kernel, M + 8)
                        .series.l2_coeff_norm();
            }
            const bool stop = !point.converged;
            c = point.c;
            v = point.solution;
            branch.points.push_back(std::move(point));
            if (stop) break;
        }
    }

    std::sort(branch.points.begin(), branch.points.end(),
              [](const BranchPoint& lhs, const BranchPoint& rhs) {
                  return lhs.amplitude < rhs.amplitude;
              });

    // Cubic extrapolation of c(s) to s = 0 through the four innermost
    // points; falls back to the average of +-ds when steps == 1.
    auto point_at = [&](double s) -> const BranchPoint* {
        for (const auto& p : branch.points)
            if (std::fabs(p.amplitude - s) <= 1e-14 * std::fabs(s) && p.converged) return &p;
        return nullptr;
    };
    const BranchPoint* inner_minus = point_at(-ds);
    const BranchPoint* inner_plus = point_at(ds);
    if (steps >= 2) {
        const BranchPoint* outer_minus = point_at(-2.0 * ds);
        const BranchPoint* outer_plus = point_at(2.0 * ds);
        if (inner_minus && inner_plus && outer_minus && outer_plus)
            branch.c_extrapolated = (2.0 / 3.0) * (inner_minus->c + inner_plus->c) -
                                    (1.0 / 6.0) * (outer_minus->c + outer_plus->c);
    } else if (inner_minus && inner_plus) {
        branch.c_extrapolated = 0.5 * (inner_minus->c + inner_plus->c);
    }
    return branch;
}

}  // namespace driftbif
