// driftbif — spectral bifurcation toolkit for the nonlocal drift equation
// div(a grad u + u Phi * grad u) = 0 on the torus.
//
// Subcommands:
//   analyze-kernel     multiplier analysis: bifurcation candidates,
//                      non-degeneracy verdicts, transversality, and the
//                      linear-problem uniqueness certificates
//   construct-explicit closed-form family member for the 2cos(2 pi x)
//                      kernel, with residual and tail certificates
//   trace-branch       Newton continuation of the nonconstant branch
//   cross-validate     traced branch vs closed form on matched amplitudes
//   verify             re-check the residual of a saved solution file
//
// Exit codes: 0 all certificates pass, 1 numerical non-convergence or a
// failed tolerance, 2 input error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftbif/driftbif.hpp"
#include "driftbif/io.hpp"

namespace {

using namespace driftbif;

constexpr int kExitPass = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

std::string strip_known_extension(const std::string& path) {
    for (const char* ext : {".json", ".csv"}) {
        const std::string suffix(ext);
        if (path.size() > suffix.size() &&
            path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
            return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

void emit(const json& report, const std::optional<std::string>& out_path,
          RunManifest* manifest = nullptr) {
    if (!out_path) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    write_text_file(*out_path, report.dump(2) + "\n");
    if (manifest) manifest->outputs.push_back(*out_path);
}

void write_manifest(RunManifest manifest, const std::string& base, double seconds) {
    manifest.timing_seconds["total"] = seconds;
    const std::string path = base + ".manifest.json";
    manifest.outputs.push_back(path);
    write_text_file(path, manifest.to_json().dump(2) + "\n");
}

json hypothesis_to_json(const HypothesisVerdict& verdict) {
    json violations = json::array();
    for (const auto& violation : verdict.violating_modes)
        violations.push_back({{"mode", violation.mode}, {"gap", violation.gap}});
    return json{{"nonzero", verdict.nonzero},
                {"separated", verdict.separated},
                {"violating_modes", violations}};
}

int cmd_analyze_kernel(const std::string& kernel_path, double a,
                       const std::vector<double>& bs, std::optional<int> lattice_radius,
                       const std::optional<std::string>& out,
                       const std::string& format) {
    PhaseTimer timer;
    double evenness_defect = 0.0;
    KernelSpectrum kernel = load_kernel(kernel_path, &evenness_defect);
    if (lattice_radius) {
        // Widen the certified radius: absent modes inside it count as zero.
        std::vector<std::pair<LatticePoint, double>> entries(kernel.entries().begin(),
                                                             kernel.entries().end());
        if (*lattice_radius < kernel.lattice_radius())
            throw IoError("--lattice-radius may only extend the kernel's own radius");
        kernel = KernelSpectrum(kernel.dim(), *lattice_radius, entries);
    }

    const BifurcationScan scan = detect_bifurcations(a, kernel);
    json candidates = json::array();
    for (const auto& candidate : scan.candidates) {
        const TransversalityResult trans = transversality_check(candidate, a, kernel);
        candidates.push_back({{"k0", candidate.k0},
                              {"c0", candidate.c0},
                              {"hypothesis_H", hypothesis_to_json(candidate.hypothesis_H)},
                              {"kernel_dim", candidate.kernel_dim},
                              {"transversality",
                               {{"prefactor", trans.prefactor},
                                {"defect", trans.defect},
                                {"passed", trans.passed}}}});
    }

    json linear = json::array();
    for (double b : bs) {
        const auto nullspace = linear_nullspace(a, b, kernel);
        const auto cert = linear_uniqueness_certificate(a, b, kernel);
        linear.push_back({{"b", b},
                          {"nullspace", nullspace},
                          {"energy_criterion", cert.energy_criterion},
                          {"spectral_criterion", cert.spectral_criterion},
                          {"kernel_l2_norm", cert.kernel_l2_norm},
                          {"energy_threshold", cert.energy_threshold}});
    }

    const json report{{"schema", 1},
                      {"a", a},
                      {"kernel",
                       {{"path", kernel_path},
                        {"dim", kernel.dim()},
                        {"lattice_radius", kernel.lattice_radius()},
                        {"l2_norm", kernel.l2_norm()},
                        {"constant", scan.constant_kernel},
                        {"evenness_defect", evenness_defect}}},
                      {"diagnostic", scan.diagnostic},
                      {"candidates", candidates},
                      {"linear", linear}};

    if (format == "csv") {
        std::string csv = "k0,c0,nonzero,separated,kernel_dim,prefactor,defect,passed\n";
        for (const auto& cand : report.at("candidates")) {
            csv += cand.at("k0").dump() + ',' + format_double(cand.at("c0").get<double>()) +
                   ',' + (cand.at("hypothesis_H").at("nonzero").get<bool>() ? "1" : "0") + ',' +
                   (cand.at("hypothesis_H").at("separated").get<bool>() ? "1" : "0") + ',' +
                   std::to_string(cand.at("kernel_dim").get<int>()) + ',' +
                   format_double(cand.at("transversality").at("prefactor").get<double>()) + ',' +
                   format_double(cand.at("transversality").at("defect").get<double>()) + ',' +
                   (cand.at("transversality").at("passed").get<bool>() ? "1" : "0") + '\n';
        }
        if (out)
            write_text_file(*out, csv);
        else
            std::cout << csv;
        return kExitPass;
    }

    if (out) {
        RunManifest manifest;
        manifest.subcommand = "analyze-kernel";
        manifest.inputs = {{"kernel", kernel_path}, {"a", a}, {"b", bs}};
        emit(report, out, &manifest);
        write_manifest(std::move(manifest), strip_known_extension(*out), timer.seconds());
    } else {
        emit(report, std::nullopt);
    }
    return kExitPass;
}

int cmd_construct_explicit(double a, double z, std::size_t modes, double tol,
                           const std::string& out, double sobolev_index) {
    PhaseTimer timer;
    const ExplicitFamilyMember member = construct_explicit(a, z, modes, tol);
    const EquationResidual residual = full_equation_residual(member, modes + 8);

    const std::string base = strip_known_extension(out);
    RunManifest manifest;
    manifest.subcommand = "construct-explicit";
    manifest.inputs = {{"a", a}, {"z", z}, {"modes", modes}, {"tol", tol}};

    json report = member_to_json(member, residual.l2);
    report["coupling_bound"] = residual.coupling_bound;
    report["sobolev_norm"] = {{"s", sobolev_index},
                              {"value", sobolev_norm(member.coeffs, sobolev_index)}};

    const std::string json_path = base + ".json";
    write_text_file(json_path, report.dump(2) + "\n");
    manifest.outputs.push_back(json_path);

    const std::string csv_path = base + ".csv";
    write_text_file(csv_path, member_samples_csv(member));
    manifest.outputs.push_back(csv_path);

    write_manifest(std::move(manifest), base, timer.seconds());
    std::printf("construct-explicit: c = %.17g, amplitude = %.17g, residual_l2 = %.3e\n",
                member.c, member.amplitude, residual.l2);
    return kExitPass;
}

int cmd_trace_branch(const std::string& kernel_path, double a, int k0, double s_max,
                     int steps, std::size_t modes, double tol, const std::string& out) {
    PhaseTimer timer;
    const KernelSpectrum kernel = load_kernel(kernel_path);
    if (!kernel.covers_up_to(static_cast<int>(modes)))
        throw IoError("kernel lattice_radius must cover --modes (1-d kernel required)");

    const BifurcationScan scan = detect_bifurcations(a, kernel);
    const BifurcationCandidate* candidate = nullptr;
    for (const auto& cand : scan.candidates)
        if (cand.k0 == LatticePoint{k0}) candidate = &cand;
    if (!candidate)
        throw IoError("no bifurcation candidate at k0 = " + std::to_string(k0) +
                      ": the kernel coefficient there vanishes, and a nonzero coefficient "
                      "is required for a bifurcation point");

    SolveConfig config;
    config.truncation = modes;
    config.newton_tol = tol;

    Branch branch = trace_branch(a, kernel, *candidate, s_max, steps, config);

    const std::string base = strip_known_extension(out);
    const std::string csv_path = base + ".csv";
    write_text_file(csv_path, branch_to_csv(branch));

    RunManifest manifest;
    manifest.subcommand = "trace-branch";
    manifest.inputs = {{"kernel", kernel_path}, {"a", a},         {"k0", k0},
                       {"s_max", s_max},        {"steps", steps}, {"modes", modes},
                       {"tol", tol}};
    manifest.outputs.push_back(csv_path);
    double max_h = 0.0;
    for (const auto& point : branch.points)
        max_h = std::max(max_h, sobolev_norm(point.solution, config.sobolev_index));
    json branch_info{{"k0", branch.k0},
                     {"a", branch.a},
                     {"c0", candidate->c0},
                     {"c_extrapolated_s0", branch.c_extrapolated},
                     {"points", branch.points.size()},
                     {"all_converged", branch.all_converged()},
                     {"max_sobolev_norm", {{"s", config.sobolev_index}, {"value", max_h}}},
                     {"config", solve_config_to_json(config)}};
    if (!branch.warning.empty()) branch_info["warning"] = branch.warning;
    manifest.results = branch_info;
    write_manifest(std::move(manifest), base, timer.seconds());

    std::printf("trace-branch: %zu points, all_converged = %s, c(s->0) = %.17g\n",
                branch.points.size(), branch.all_converged() ? "true" : "false",
                branch.c_extrapolated);
    return branch.all_converged() ? kExitPass : kExitNumeric;
}

int cmd_cross_validate(double a, double z_max, int steps, std::size_t modes,
                       const std::optional<std::string>& out) {
    PhaseTimer timer;
    constexpr double kTolerance = 1e-8;
    const KernelSpectrum kernel = cosine_kernel(static_cast<int>(modes) + 8);
    if (!is_cosine_kernel(kernel))
        throw std::logic_error("cross-validate: built-in kernel mismatch");

    const BifurcationScan scan = detect_bifurcations(a, kernel);
    const BifurcationCandidate& candidate = scan.candidates.front();

    SolveConfig config;
    config.truncation = modes;

    const Branch branch = trace_branch(a, kernel, candidate, a * z_max, steps, config);

    double max_dc = 0.0, max_dist = 0.0;
    json points = json::array();
    for (const auto& point : branch.points) {
        const double z = -point.amplitude / a;  // matched parameter: s = -a z
        const ExplicitFamilyMember member = construct_explicit(a, z, modes, 1e-13);
        const double dc = std::fabs(point.c - member.c);
        const double dist = (point.solution - member.coeffs).l2_coeff_norm();
        max_dc = std::max(max_dc, dc);
        max_dist = std::max(max_dist, dist);
        points.push_back({{"s", point.amplitude},
                          {"z", z},
                          {"c_branch", point.c},
                          {"c_family", member.c},
                          {"dc", dc},
                          {"coeff_l2_dist", dist}});
    }

    const bool pass =
        branch.all_converged() && max_dc <= kTolerance && max_dist <= kTolerance;
    const json report{{"schema", 1},
                      {"a", a},
                      {"z_max", z_max},
                      {"steps", steps},
                      {"modes", modes},
                      {"tolerance", kTolerance},
                      {"max_abs_dc", max_dc},
                      {"max_coeff_l2_dist", max_dist},
                      {"all_converged", branch.all_converged()},
                      {"c0", candidate.c0},
                      {"c_extrapolated_s0", branch.c_extrapolated},
                      {"pass", pass},
                      {"points", points}};

    if (out) {
        RunManifest manifest;
        manifest.subcommand = "cross-validate";
        manifest.inputs = {{"a", a}, {"z_max", z_max}, {"steps", steps}, {"modes", modes}};
        emit(report, out, &manifest);
        write_manifest(std::move(manifest), strip_known_extension(*out), timer.seconds());
    } else {
        emit(report, std::nullopt);
    }
    std::fprintf(stderr, "cross-validate: max|dc| = %.3e, max coeff dist = %.3e -> %s\n",
                 max_dc, max_dist, pass ? "pass" : "FAIL");
    return pass ? kExitPass : kExitNumeric;
}

int cmd_verify(const std::string& solution_path,
               const std::optional<std::string>& kernel_path, double tol) {
    const json solution = load_json_file(solution_path);
    double a = 0.0, c = 0.0;
    std::vector<double> coeffs;
    try {
        a = solution.at("a").get<double>();
        c = solution.at("c").get<double>();
        coeffs = solution.at("coeffs").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw IoError(solution_path + ": not a solution record (" + e.what() + ")");
    }
    const CosineSeries v{coeffs};
    const std::size_t M = v.order();

    const bool is_family_member = solution.contains("z");
    KernelSpectrum kernel = cosine_kernel(static_cast<int>(M) + 8);
    if (kernel_path) {
        kernel = load_kernel(*kernel_path);
        if (is_family_member && !is_cosine_kernel(kernel))
            throw IoError(
                "this solution was built for the 2cos(2 pi x) kernel; the supplied kernel "
                "spectrum does not match");
    }
    if (!kernel.covers_up_to(static_cast<int>(M)))
        throw IoError("kernel lattice_radius must cover the solution's modes");

    const std::size_t check_order =
        kernel.covers_up_to(static_cast<int>(M) + 8) ? M + 8 : M;
    const auto residual = evaluate_map(c, v, a, kernel, check_order);
    const double l2 = residual.series.l2_coeff_norm();
    const bool pass = l2 <= tol;

    const json report{{"schema", 1},
                      {"file", solution_path},
                      {"a", a},
                      {"c", c},
                      {"modes", M},
                      {"check_order", check_order},
                      {"residual_l2", l2},
                      {"truncation_tail", residual.truncation_residual},
                      {"tol", tol},
                      {"pass", pass}};
    std::cout << report.dump(2) << '\n';
    return pass ? kExitPass : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driftbif: spectral bifurcation toolkit for nonlocal drift equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("driftbif ") + driftbif::kVersion);

    // analyze-kernel
    auto* analyze = app.add_subcommand("analyze-kernel",
                                       "bifurcation candidates and uniqueness certificates");
    std::string kernel_path;
    double a = 1.0;
    std::vector<double> bs;
    std::optional<int> lattice_radius;
    std::optional<std::string> out_opt;
    std::string format = "json";
    analyze->add_option("--kernel", kernel_path, "kernel spectrum file")->required();
    analyze->add_option("--a", a, "diffusion coefficient a > 0")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--b", bs, "drift weights for the linear-problem analysis");
    analyze->add_option("--lattice-radius", lattice_radius,
                        "extend the certified lattice radius of the scan");
    analyze->add_option("--out", out_opt, "write the report here instead of stdout");
    analyze->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    // construct-explicit
    auto* construct = app.add_subcommand("construct-explicit",
                                         "closed-form member for the 2cos(2 pi x) kernel");
    double cz = 0.0, ca = 1.0, ctol = 1e-11, csob = 2.0;
    std::size_t cmodes = 32;
    std::string cout_path;
    construct->add_option("--a", ca, "diffusion coefficient a > 0")->check(CLI::PositiveNumber);
    construct->add_option("--z", cz, "family parameter, z != 0")->required();
    construct->add_option("--modes", cmodes, "truncation order M >= 2");
    construct->add_option("--tol", ctol, "aggregate coefficient tolerance")
        ->check(CLI::PositiveNumber);
    construct->add_option("--sobolev-index", csob, "s for the reported H^s norm");
    construct->add_option("--out", cout_path, "output base path (.json/.csv/.manifest.json)")
        ->required();

    // trace-branch
    auto* trace = app.add_subcommand("trace-branch", "Newton continuation of the branch");
    std::string tkernel, tout;
    double ta = 1.0, ts_max = 1.0, ttol = 1e-11;
    int tk0 = 1, tsteps = 20;
    std::size_t tmodes = 32;
    trace->add_option("--kernel", tkernel, "kernel spectrum file")->required();
    trace->add_option("--a", ta, "diffusion coefficient a > 0")->check(CLI::PositiveNumber);
    trace->add_option("--k0", tk0, "bifurcation mode")->check(CLI::PositiveNumber);
    trace->add_option("--s-max", ts_max, "largest amplitude")->check(CLI::PositiveNumber);
    trace->add_option("--steps", tsteps, "continuation steps per sign")
        ->check(CLI::PositiveNumber);
    trace->add_option("--modes", tmodes, "truncation order M");
    trace->add_option("--tol", ttol, "Newton residual tolerance")->check(CLI::PositiveNumber);
    trace->add_option("--out", tout, "output base path (.csv/.manifest.json)")->required();

    // cross-validate
    auto* cross = app.add_subcommand("cross-validate",
                                     "traced branch vs closed form, matched amplitudes");
    double xa = 1.0, xz_max = 1.0;
    int xsteps = 20;
    std::size_t xmodes = 32;
    std::optional<std::string> xout;
    cross->add_option("--a", xa, "diffusion coefficient a > 0")->check(CLI::PositiveNumber);
    cross->add_option("--z-max", xz_max, "largest family parameter")
        ->check(CLI::PositiveNumber);
    cross->add_option("--steps", xsteps, "continuation steps per sign")
        ->check(CLI::PositiveNumber);
    cross->add_option("--modes", xmodes, "truncation order M");
    cross->add_option("--out", xout, "write the report here instead of stdout");

    // verify
    auto* verify = app.add_subcommand("verify", "re-check a saved solution's residual");
    std::string vfile;
    std::optional<std::string> vkernel;
    double vtol = 1e-11;
    verify->add_option("file", vfile, "solution JSON (construct-explicit output)")->required();
    verify->add_option("--kernel", vkernel, "kernel spectrum file (default: 2cos(2 pi x))");
    verify->add_option("--tol", vtol, "residual acceptance tolerance")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze_kernel(kernel_path, a, bs, lattice_radius, out_opt, format);
        if (construct->parsed())
            return cmd_construct_explicit(ca, cz, cmodes, ctol, cout_path, csob);
        if (trace->parsed())
            return cmd_trace_branch(tkernel, ta, tk0, ts_max, tsteps, tmodes, ttol, tout);
        if (cross->parsed()) return cmd_cross_validate(xa, xz_max, xsteps, xmodes, xout);
        if (verify->parsed()) return cmd_verify(vfile, vkernel, vtol);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitInput;
}
