// io.hpp — file formats: kernel spectra (JSON), explicit-solution members
// (JSON + sampled CSV), branch curves (CSV) and run manifests.
//
// Kernel schema, version 1:
//   {"schema": 1, "dim": d, "lattice_radius": R,
//    "coefficients": [[[k1,...,kd], value], ...]}
// or, for sampled 1-d kernels on the grid x_i = i/N:
//   {"schema": 1, "dim": 1, "grid_size": N, "samples": [...]}
//
// Floating-point text output uses 17 significant digits so every value
// round-trips; identical inputs therefore reproduce outputs byte for
// byte on the same platform.

#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbif/continuation.hpp"
#include "driftbif/explicit_solution.hpp"
#include "driftbif/kernel_spectrum.hpp"
#include "driftbif/version.hpp"

namespace driftbif {

using nlohmann::json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());  // carries byte position
    }
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

inline KernelSpectrum kernel_from_json(const json& j, double* evenness_defect = nullptr) {
    try {
        if (j.value("schema", 1) != 1) throw IoError("unsupported kernel schema version");
        const int dim = j.at("dim").get<int>();
        if (j.contains("samples")) {
            if (dim != 1) throw IoError("sampled kernels must have dim = 1");
            const auto samples = j.at("samples").get<std::vector<double>>();
            if (j.contains("grid_size") &&
                j.at("grid_size").get<std::size_t>() != samples.size())
                throw IoError("grid_size does not match the number of samples");
            return KernelSpectrum::from_samples(samples, evenness_defect);
        }
        const int radius = j.at("lattice_radius").get<int>();
        std::vector<std::pair<LatticePoint, double>> coefficients;
        for (const auto& entry : j.at("coefficients")) {
            if (!entry.is_array() || entry.size() != 2)
                throw IoError("each coefficient must be a [mode, value] pair");
            coefficients.emplace_back(entry[0].get<LatticePoint>(), entry[1].get<double>());
        }
        if (evenness_defect) *evenness_defect = 0.0;
        return KernelSpectrum(dim, radius, coefficients, j.value("l2_norm", -1.0));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed kernel file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("invalid kernel data: ") + e.what());
    }
}

inline KernelSpectrum load_kernel(const std::string& path, double* evenness_defect = nullptr) {
    return kernel_from_json(load_json_file(path), evenness_defect);
}

inline json kernel_to_json(const KernelSpectrum& kernel) {
    json coefficients = json::array();
    for (const auto& [k, value] : kernel.entries())
        coefficients.push_back(json::array({k, value}));
    return json{{"schema", 1},
                {"dim", kernel.dim()},
                {"lattice_radius", kernel.lattice_radius()},
                {"coefficients", coefficients}};
}

inline json member_to_json(const ExplicitFamilyMember& member, double residual_l2) {
    return json{{"schema", 1},
                {"a", member.a},
                {"z", member.z},
                {"M", member.order},
                {"c", member.c},
                {"amplitude", member.amplitude},
                {"coeffs", member.coeffs.coeffs()},
                {"tail_certificate", member.tail_certificate},
                {"residual_l2", residual_l2}};
}

// Plot-ready samples of u(x) = c + v(x) on a uniform grid.
inline std::string member_samples_csv(const ExplicitFamilyMember& member,
                                      std::size_t n_samples = 1024) {
    std::ostringstream out;
    out << "x,u\n";
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n_samples);
        out << format_double(x) << ',' << format_double(member.c + member.coeffs.evaluate(x))
            << '\n';
    }
    return out.str();
}

// Branch CSV: one row per point, header s,c,residual_l2,newton_iters,V_1..V_M.
inline std::string branch_to_csv(const Branch& branch) {
    std::ostringstream out;
    out << "s,c,residual_l2,newton_iters";
    const std::size_t M = branch.provenance.config.truncation;
    for (std::size_t m = 1; m <= M; ++m) out << ",V_" << m;
    out << '\n';
    for (const auto& point : branch.points) {
        out << format_double(point.amplitude) << ',' << format_double(point.c) << ','
            << format_double(point.residual_l2) << ',' << point.newton_iters;
        for (std::size_t m = 1; m <= M; ++m)
            out << ',' << format_double(point.solution.coeff(static_cast<int>(m)));
        out << '\n';
    }
    return out.str();
}

inline json solve_config_to_json(const SolveConfig& config) {
    return json{{"truncation", config.truncation},
                {"newton_tol", config.newton_tol},
                {"newton_max_iter", config.newton_max_iter},
                {"fd_step", config.fd_step},
                {"sobolev_index", config.sobolev_index}};
}

// Provenance record written next to every file-producing run.
struct RunManifest {
    std::string subcommand;
    json inputs;
    json results;  // summary figures of the run, when any
    std::vector<std::string> outputs;
    std::map<std::string, double> timing_seconds;

    json to_json() const {
        json j{{"schema", 1},
               {"subcommand", subcommand},
               {"inputs", inputs},
               {"outputs", outputs},
               {"versions", {{"driftbif", kVersion}}},
               {"timing_seconds", timing_seconds}};
        if (!results.is_null()) j["results"] = results;
        return j;
    }
};

class PhaseTimer {
public:
    PhaseTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace driftbif
