#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "driftbif/continuation.hpp"
#include "driftbif/explicit_solution.hpp"
#include "oracles.hpp"

using namespace driftbif;

namespace {

double l2_of(const CosineSeries& v) { return v.l2_coeff_norm(); }

}  // namespace

TEST_CASE("constants solve the equation for every parameter value", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(16);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> cs(-5.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = evaluate_map(cs(rng), CosineSeries(16), 1.0, kernel, 16);
        CHECK(l2_of(f.series) == 0.0);
        CHECK(f.truncation_residual == 0.0);
    }
}

TEST_CASE("the linear part vanishes on the critical mode at c0", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(8);
    const double eps = 1e-8;
    const auto f = evaluate_map(-1.0, CosineSeries(std::vector<double>{eps}), 1.0, kernel, 4);
    CHECK(f.series.coeff(1) == 0.0);  // exact: a + c0 Phi_hat(1) groups to zero
    CHECK(f.series.coeff(2) ==
          Catch::Approx(-kTwoPi * kTwoPi * eps * eps).epsilon(1e-12));
    CHECK(f.series.coeff(3) == 0.0);
}

TEST_CASE("the closed-form member is a numerical zero of the map", "[continuation]") {
    const auto member = construct_explicit(1.0, 1.0, 25, 1e-13);
    const KernelSpectrum kernel = cosine_kernel(30);
    const auto f = evaluate_map(member.c, member.coeffs, member.a, kernel, 30);
    CHECK(l2_of(f.series) <= 1e-14);
}

TEST_CASE("jacobian at the trivial state is the multiplier diagonal", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(4);
    const auto sys = assemble_jacobian(-1.0, CosineSeries(4), 1.0, kernel, 4);
    const double w2 = kTwoPi * kTwoPi;
    CHECK(std::fabs(sys.dv(0, 0)) <= 1e-14 * w2);
    CHECK(sys.dv(1, 1) == Catch::Approx(-4.0 * w2).epsilon(1e-15));
    CHECK(sys.dv(2, 2) == Catch::Approx(-9.0 * w2).epsilon(1e-15));
    CHECK(sys.dv(3, 3) == Catch::Approx(-16.0 * w2).epsilon(1e-15));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sys.c_column[i] == 0.0);
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) CHECK(sys.dv(i, j) == 0.0);
    }

    // c = 0 leaves the pure weighted Laplacian.
    const auto lap = assemble_jacobian(0.0, CosineSeries(4), 1.0, kernel, 4);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(lap.dv(j, j) == Catch::Approx(-double(j + 1) * double(j + 1) * w2).epsilon(1e-15));
}

TEST_CASE("jacobian matches central finite differences", "[continuation][property]") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> cs(-1.5, 0.5);
    const std::size_t M = 16;
    std::vector<std::pair<LatticePoint, double>> coefficients;
    std::uniform_real_distribution<double> vals(-0.6, 0.6);
    for (int q = 1; q <= int(M); ++q) coefficients.push_back({{q}, vals(rng)});
    const KernelSpectrum kernel(1, int(M), coefficients);
    const SolveConfig config;

    for (int trial = 0; trial < 6; ++trial) {
        const CosineSeries v = oracles::random_decaying_series(rng, M);
        const double c = cs(rng);
        const auto sys = assemble_jacobian(c, v, 1.0, kernel, M);
        const CosineSeries h = oracles::random_decaying_series(rng, M);

        const CosineSeries fd =
            oracles::fd_directional_derivative(c, v, 1.0, kernel, 0.0, h, config.fd_step, M);
        const std::vector<double> jh = sys.dv.apply(h.coeffs());
        long double num = 0.0L, den = 0.0L;
        for (std::size_t i = 0; i < M; ++i) {
            const long double d = jh[i] - fd.coeff(int(i) + 1);
            num += d * d;
            den += static_cast<long double>(fd.coeff(int(i) + 1)) * fd.coeff(int(i) + 1);
        }
        INFO("trial=" << trial);
        CHECK(double(std::sqrt(double(num / den))) <= 1e-6);

        // The c-column is the exact c-derivative (the map is linear in c).
        const CosineSeries fdc = oracles::fd_directional_derivative(
            c, v, 1.0, kernel, 1.0, CosineSeries(M), 1e-4, M);
        for (std::size_t i = 0; i < M; ++i)
            CHECK(sys.c_column[i] == Catch::Approx(fdc.coeff(int(i) + 1)).margin(1e-9));
    }
}

TEST_CASE("second derivative is symmetric, constant and completes the Taylor sum",
          "[continuation][property]") {
    std::mt19937 rng(23);
    const std::size_t M = 16;
    const KernelSpectrum kernel(1, int(M), {{{1}, 1.0}, {{2}, -0.5}, {{3}, 0.25}});
    std::uniform_real_distribution<double> deltas(-0.7, 0.7);

    const CosineSeries zero(M);
    const CosineSeries none = second_derivative_action(zero, zero, 0.0, 0.0, kernel, M);
    CHECK(l2_of(none) == 0.0);

    for (int trial = 0; trial < 8; ++trial) {
        const CosineSeries h1 = oracles::random_decaying_series(rng, M);
        const CosineSeries h2 = oracles::random_decaying_series(rng, M);
        const double dc1 = deltas(rng), dc2 = deltas(rng);

        const CosineSeries forward = second_derivative_action(h1, h2, dc1, dc2, kernel, M);
        const CosineSeries swapped = second_derivative_action(h2, h1, dc2, dc1, kernel, M);
        for (int m = 1; m <= int(M); ++m) CHECK(forward.coeff(m) == swapped.coeff(m));

        // F(c+dc, v+h) - F(c,v) - DF(c,v)[dc,h] - D2F[(dc,h),(dc,h)]/2 = 0:
        // the map is a polynomial of degree two, so the identity is exact
        // up to rounding.
        const CosineSeries v = oracles::random_decaying_series(rng, M);
        const double c = deltas(rng);
        const auto sys = assemble_jacobian(c, v, 1.0, kernel, M);
        const CosineSeries f0 = evaluate_map(c, v, 1.0, kernel, M).series;
        const CosineSeries f1 = evaluate_map(c + dc1, v + h1, 1.0, kernel, M).series;
        const std::vector<double> jh = sys.dv.apply(h1.coeffs());
        const CosineSeries d2 = second_derivative_action(h1, h1, dc1, dc1, kernel, M);
        long double err_sq = 0.0L;
        for (int m = 1; m <= int(M); ++m) {
            const long double taylor = f0.coeff(m) + jh[m - 1] + dc1 * sys.c_column[m - 1] +
                                       0.5L * d2.coeff(m);
            err_sq += (f1.coeff(m) - taylor) * (f1.coeff(m) - taylor);
        }
        INFO("trial=" << trial);
        CHECK(double(std::sqrt(double(err_sq))) <= 1e-12);
    }
}

TEST_CASE("corrector at zero amplitude returns the constant state", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(8);
    const SolveConfig config{.truncation = 8};
    const BranchPoint point = corrector(0.0, -1.0, CosineSeries(8), 1.0, kernel, 1, config);
    CHECK(point.converged);
    CHECK(point.newton_iters == 0);
    CHECK(point.residual_l2 == 0.0);
    CHECK(l2_of(point.solution) == 0.0);
}

TEST_CASE("corrector lands on the closed-form branch value", "[continuation]") {
    const std::size_t M = 32;
    const KernelSpectrum kernel = cosine_kernel(int(M));
    SolveConfig config;
    config.truncation = M;

    const BranchPoint minus = corrector(-0.5, -1.0, CosineSeries(M), 1.0, kernel, 1, config);
    REQUIRE(minus.converged);
    CHECK(minus.residual_l2 <= config.newton_tol);
    CHECK(minus.solution.coeff(1) == -0.5);  // the constraint row is exact
    CHECK(minus.c == Catch::Approx(-1.0309294820695802).margin(1e-9));

    // Opposite amplitude: same constant by the half-period translation.
    const BranchPoint plus = corrector(+0.5, -1.0, CosineSeries(M), 1.0, kernel, 1, config);
    REQUIRE(plus.converged);
    CHECK(plus.c == Catch::Approx(minus.c).epsilon(1e-12));

    // Coefficients match the closed-form member under s = -a z.
    const auto member = construct_explicit(1.0, 0.5, M, 1e-13);
    for (int m = 1; m <= int(M); ++m)
        CHECK(minus.solution.coeff(m) == Catch::Approx(member.coeffs.coeff(m)).margin(1e-10));
}

TEST_CASE("branch tracing reproduces the closed-form family", "[continuation]") {
    const std::size_t M = 32;
    const KernelSpectrum kernel = cosine_kernel(int(M) + 8);
    SolveConfig config;
    config.truncation = M;
    const auto candidate = detect_bifurcations(1.0, kernel).candidates.front();

    const Branch branch = trace_branch(1.0, kernel, candidate, 0.5, 5, config);
    REQUIRE(branch.points.size() == 10);
    CHECK(branch.all_converged());
    CHECK(branch.warning.empty());

    for (const auto& point : branch.points) {
        CHECK(point.residual_l2 <= config.newton_tol);
        CHECK(point.residual_enlarged <= 10.0 * config.newton_tol);
        const double z = -point.amplitude;  // a = 1
        const auto member = construct_explicit(1.0, z, M, 1e-13);
        CHECK(std::fabs(point.c - member.c) <= 1e-8);
        CHECK(l2_of(point.solution - member.coeffs) <= 1e-8);
    }

    // Points sorted by amplitude and the curve extrapolates to c0.
    for (std::size_t i = 0; i + 1 < branch.points.size(); ++i)
        CHECK(branch.points[i].amplitude < branch.points[i + 1].amplitude);
    CHECK(std::fabs(branch.c_extrapolated - candidate.c0) <= 1e-5);
}

TEST_CASE("branches exist beyond the pure-cosine kernel", "[continuation]") {
    const std::size_t M = 24;
    const KernelSpectrum kernel(1, int(M) + 8, {{{1}, 1.0}, {{2}, 0.5}});
    SolveConfig config;
    config.truncation = M;
    const auto scan = detect_bifurcations(1.0, kernel);
    REQUIRE(scan.candidates.size() == 2);
    const auto& candidate = scan.candidates.front();  // k0 = 1
    REQUIRE(candidate.hypothesis_H.satisfied());

    const Branch branch = trace_branch(1.0, kernel, candidate, 0.4, 4, config);
    CHECK(branch.all_converged());
    for (const auto& point : branch.points) {
        CHECK(point.residual_l2 <= config.newton_tol);
        CHECK(point.residual_enlarged <= 10.0 * config.newton_tol);
    }
    // No closed form here: certify a genuinely two-mode solution instead.
    const auto& outer = branch.points.back();
    CHECK(std::fabs(outer.solution.coeff(2)) > 1e-4);
}

TEST_CASE("non-uniqueness exhibit: two states, one parameter value", "[continuation]") {
    const std::size_t M = 32;
    const KernelSpectrum kernel = cosine_kernel(int(M));
    SolveConfig config;
    config.truncation = M;
    const BranchPoint point = corrector(0.5, -1.03, CosineSeries(M), 1.0, kernel, 1, config);
    REQUIRE(point.converged);

    const double c_star = point.c;
    const auto nonconstant = evaluate_map(c_star, point.solution, 1.0, kernel, M);
    const auto constant = evaluate_map(c_star, CosineSeries(M), 1.0, kernel, M);
    CHECK(l2_of(nonconstant.series) <= config.newton_tol);
    CHECK(l2_of(constant.series) == 0.0);
    CHECK(l2_of(point.solution) > 0.1);  // genuinely distinct from the constant
}

TEST_CASE("first-step failure aborts with a diagnosis", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(16);
    SolveConfig config;
    config.truncation = 16;
    config.newton_tol = 1e-30;  // unattainable
    config.newton_max_iter = 4;
    const auto candidate = detect_bifurcations(1.0, kernel).candidates.front();
    CHECK_THROWS_WITH(trace_branch(1.0, kernel, candidate, 0.5, 5, config),
                      Catch::Matchers::ContainsSubstring("no branch found"));
}

TEST_CASE("tracing validates its inputs", "[continuation]") {
    const KernelSpectrum kernel = cosine_kernel(16);
    SolveConfig config;
    config.truncation = 16;
    const auto candidate = detect_bifurcations(1.0, kernel).candidates.front();
    CHECK_THROWS_AS(trace_branch(1.0, kernel, candidate, 0.0, 5, config), std::invalid_argument);
    CHECK_THROWS_AS(trace_branch(1.0, kernel, candidate, 0.5, 0, config), std::invalid_argument);

    BifurcationCandidate big = candidate;
    big.k0 = {40};
    CHECK_THROWS_AS(trace_branch(1.0, kernel, big, 0.5, 5, config), std::invalid_argument);

    SolveConfig bad = config;
    bad.newton_tol = -1.0;
    CHECK_THROWS_AS(corrector(0.1, -1.0, CosineSeries(16), 1.0, kernel, 1, bad),
                    std::invalid_argument);
}

TEST_CASE("degenerate kernels trace with a warning", "[continuation]") {
    const std::size_t M = 16;
    const KernelSpectrum kernel(1, int(M) + 8, {{{1}, 1.0}, {{2}, 1.0}});
    SolveConfig config;
    config.truncation = M;
    const auto scan = detect_bifurcations(1.0, kernel);
    const auto& candidate = scan.candidates.front();
    REQUIRE_FALSE(candidate.hypothesis_H.satisfied());

    const Branch branch = trace_branch(1.0, kernel, candidate, 0.2, 2, config);
    CHECK_FALSE(branch.warning.empty());
    for (const auto& point : branch.points) {
        CHECK(std::isfinite(point.jacobian_pivot_ratio));  // conditioning is reported
        if (point.converged) CHECK(point.residual_l2 <= config.newton_tol);
    }
}
