// optimizer.hpp — Brute-force ascent of the channel fidelity over the IR
// unitary manifold. Used as an independent oracle for the mean-field rule.

#pragma once

#include "effdyn/channel.hpp"
#include "effdyn/types.hpp"

#include <cstdint>
#include <optional>

namespace effdyn {

struct OptimizerConfig {
    int restarts = 4;
    int max_iters = 400;
    double initial_step = 0.2;
    double grad_tolerance = 1e-9;
    std::uint64_t seed = 0;
    double fd_step = 1e-6;
};

struct OptResult {
    Matrix best_unitary;
    double best_fidelity = 0.0;
    int iterations = 0;
    bool converged = false;
    int restart_index = 0;
};

/// Maximize F(U_IR) = Tr_UV[O_UV ρ_UV O_UV†]/d_ir² by gradient ascent in
/// exponential coordinates around the current iterate, with central
/// finite-difference gradients and a backtracking line search. Best over
/// restarts; one restart uses warm_start when given, the rest start from
/// Haar-random unitaries.
OptResult maximize_fidelity(const BipartiteOperator& u, const DensityMatrix& rho_uv,
                            const OptimizerConfig& cfg,
                            const std::optional<Matrix>& warm_start = std::nullopt);

/// min over a global phase φ of ||a − e^{iφ} b|| (Frobenius).
double phase_align(const Matrix& a, const Matrix& b);

}  // namespace effdyn
