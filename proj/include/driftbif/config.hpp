#pragma once

#include <cstddef>
#include <stdexcept>

namespace driftbif {

// Solver settings shared by the branch-tracing routines.  sobolev_index
// only affects diagnostic norm reporting.
struct SolveConfig {
    std::size_t truncation = 32;   // number of cosine modes M
    double newton_tol = 1e-11;     // residual l2 threshold
    int newton_max_iter = 25;
    double fd_step = 1e-6;         // step for finite-difference Jacobian checks
    double sobolev_index = 2.0;    // s in the reported H^s norms

    void validate() const {
        if (truncation < 2) throw std::invalid_argument("SolveConfig: truncation must be >= 2");
        if (!(newton_tol > 0.0)) throw std::invalid_argument("SolveConfig: newton_tol must be > 0");
        if (newton_max_iter < 1)
            throw std::invalid_argument("SolveConfig: newton_max_iter must be >= 1");
        if (!(fd_step > 0.0)) throw std::invalid_argument("SolveConfig: fd_step must be > 0");
        if (sobolev_index < 0.0)
            throw std::invalid_argument("SolveConfig: sobolev_index must be >= 0");
    }
};

}  // namespace driftbif
